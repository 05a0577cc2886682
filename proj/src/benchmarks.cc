#include "parkroute/benchmarks.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "parkroute/errors.h"
#include "parkroute/heuristic.h"

namespace parkroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Solved {
  Solution solution;
  double objective = 0.0;
  std::string method;
  bool proven = false;
};

// Exact at desk scale, heuristic beyond or when the search yields nothing.
// `weights` apply to the exact model; the heuristic sees `scaled` instead.
Solved solve_model(const Instance& model_inst, const Instance& scaled,
                   const ServiceSetCatalog& cat, const ObjectiveWeights& weights,
                   const BenchmarkOptions& options) {
  Solved out;
  if (model_inst.n <= options.exact_max_customers && model_inst.n <= kMaxExactCustomers &&
      cat.materialized()) {
    ExactOptions eo;
    eo.budget = options.budget;
    eo.weights = weights;
    eo.threads = options.threads;
    ExactResult r = solve_exact(model_inst, cat, eo);
    if (r.solution) {
      out.solution = *r.solution;
      out.objective = r.objective;
      out.method = "exact";
      out.proven = r.status == SolveStatus::kOptimal;
      return out;
    }
  }
  HeuristicResult h = heuristic_solve(scaled, cat);
  out.solution = h.solution;
  out.objective = h.solution.total;
  out.method = "heuristic";
  return out;
}

BenchmarkResult finish(std::string name, const Instance& inst, Solved solved) {
  BenchmarkResult r;
  r.name = std::move(name);
  r.solution = std::move(solved.solution);
  cost_solution(inst, r.solution);
  r.model_objective = solved.objective;
  r.completion = r.solution.total;
  r.stops = r.solution.stop_count();
  r.method = std::move(solved.method);
  r.proven = solved.proven;
  return r;
}

double fixed_order_walk(const Instance& inst, LocationId spot,
                        const std::vector<LocationId>& order, int first, int last) {
  double total = inst.walk(spot, order[first]) + inst.walk(order[last], spot);
  for (int t = first; t < last; ++t) total += inst.walk(order[t], order[t + 1]);
  return total;
}

}  // namespace

BenchmarkResult no_parking_benchmark(const Instance& inst, const ServiceSetCatalog& cat,
                                     const BenchmarkOptions& options) {
  Instance free_parking = inst;
  std::fill(free_parking.park_time.begin(), free_parking.park_time.end(), 0.0);
  return finish("npt", inst, solve_model(free_parking, free_parking, cat, {}, options));
}

SplitResult split_fixed_order(const Instance& inst, const ServiceSetCatalog& cat,
                              const std::vector<LocationId>& order) {
  const int n = static_cast<int>(order.size());
  if (n != inst.n) throw DimensionError("the service order must list every customer once");
  const int q = inst.capacity_count.value_or(n);

  // group[(s * n + a) * n + b]: cheapest split of order[a..b] into consecutive
  // walking sets from spot position s; cut[...] is the start of the last set.
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  std::vector<double> group(n3, kInf);
  std::vector<int> cut(n3, -1);
  auto at = [n](int s, int a, int b) {
    return (static_cast<std::size_t>(s) * n + a) * n + b;
  };
  std::vector<LocationId> members;
  for (int s = 0; s < n; ++s) {
    const LocationId spot = order[s];
    if (!inst.is_parking(spot)) continue;
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        double best = kInf;
        int arg = -1;
        for (int e = b; e >= a && b - e < q; --e) {
          members.assign(order.begin() + e, order.begin() + b + 1);
          std::sort(members.begin(), members.end());
          if (!cat.admissible(spot, members)) continue;
          const double before = e == a ? 0.0 : group[at(s, a, e - 1)];
          const double value = before + fixed_order_walk(inst, spot, order, e, b);
          if (value < best) {
            best = value;
            arg = e;
          }
        }
        group[at(s, a, b)] = best;
        cut[at(s, a, b)] = arg;
      }
    }
  }

  // best_end[b * n + s]: customers order[0..b] served, last block ends at b
  // with its spot at position s.
  std::vector<double> best_end(static_cast<std::size_t>(n) * n, kInf);
  struct Back {
    int a = -1;
    int prev = -1;  // spot position of the previous block, -1 for the depot
  };
  std::vector<Back> back(static_cast<std::size_t>(n) * n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a <= b; ++a) {
      for (int s = a; s <= b; ++s) {
        const double walk = group[at(s, a, b)];
        if (walk == kInf) continue;
        const LocationId spot = order[s];
        const double stay = inst.park_time[spot] + walk;
        double best = kInf;
        int prev = -1;
        if (a == 0) {
          best = inst.drive(kDepot, spot) + stay;
        } else {
          for (int ps = 0; ps < a; ++ps) {
            const double f = best_end[(a - 1) * n + ps];
            if (f == kInf) continue;
            const double value = f + inst.drive(order[ps], spot) + stay;
            if (value < best) {
              best = value;
              prev = ps;
            }
          }
        }
        if (best < best_end[b * n + s]) {
          best_end[b * n + s] = best;
          back[b * n + s] = {a, prev};
        }
      }
    }
  }
  double best = kInf;
  int last = -1;
  for (int s = 0; s < n; ++s) {
    const double f = best_end[(n - 1) * n + s];
    if (f == kInf) continue;
    const double value = f + inst.drive(order[s], kDepot);
    if (value < best) {
      best = value;
      last = s;
    }
  }
  if (last < 0) throw InfeasibleError("no split of the service order is feasible");

  SplitResult result;
  std::vector<Stop> reversed;
  for (int b = n - 1, s = last; b >= 0;) {
    const Back bk = back[b * n + s];
    Stop stop;
    stop.location = order[s];
    std::vector<std::vector<LocationId>> sets;
    for (int e = b; e >= bk.a;) {
      const int start = cut[at(s, bk.a, e)];
      sets.emplace_back(order.begin() + start, order.begin() + e + 1);
      e = start - 1;
    }
    stop.sets.assign(sets.rbegin(), sets.rend());
    reversed.push_back(std::move(stop));
    b = bk.a - 1;
    s = bk.prev;
  }
  result.solution.stops.assign(reversed.rbegin(), reversed.rend());
  result.cost = best + inst.total_load();
  return result;
}

BenchmarkResult modified_tsp(const Instance& inst, const ServiceSetCatalog& cat,
                             const BenchmarkOptions& options) {
  (void)options;
  std::vector<LocationId> customers;
  for (LocationId c = 1; c <= inst.n; ++c) customers.push_back(c);
  const ParkingRoute tsp = route_parking(inst, customers);
  SplitResult split = split_fixed_order(inst, cat, tsp.order);
  Solved solved;
  solved.solution = std::move(split.solution);
  solved.objective = split.cost;
  solved.method = "split";
  solved.proven = tsp.exact;
  return finish("mtsp", inst, std::move(solved));
}

BenchmarkResult relaxed_ms(const Instance& inst, const ServiceSetCatalog& cat, double alpha,
                           const BenchmarkOptions& options) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidValueError("alpha must lie in [0, 1]");
  }
  Instance scaled = inst;
  for (int a = 0; a < inst.num_locations(); ++a) {
    for (int b = 0; b < inst.num_locations(); ++b) {
      scaled.drive(a, b) *= alpha;
      scaled.walk(a, b) *= 1.0 - alpha;
    }
  }
  std::fill(scaled.park_time.begin(), scaled.park_time.end(), 0.0);
  const ObjectiveWeights weights{alpha, 0.0, 1.0 - alpha};
  Solved solved;
  if (inst.n <= options.exact_max_customers && inst.n <= kMaxExactCustomers &&
      cat.materialized()) {
    solved = solve_model(inst, scaled, cat, weights, options);
  } else {
    solved = solve_model(scaled, scaled, ServiceSetCatalog::rules_only(scaled, cat.reduced()),
                         weights, options);
  }
  BenchmarkSpec spec{"ms", alpha};
  BenchmarkResult r = finish(spec.label(), inst, std::move(solved));
  r.degenerate = alpha == 0.0 || alpha == 1.0;
  return r;
}

std::string BenchmarkSpec::label() const {
  if (kind != "ms") return kind;
  std::ostringstream out;
  out << "ms:" << alpha;
  return out.str();
}

std::vector<BenchmarkSpec> parse_benchmark_list(const std::string& text) {
  std::vector<BenchmarkSpec> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "npt" || item == "mtsp") {
      out.push_back({item, 0.0});
    } else if (item.rfind("ms:", 0) == 0) {
      double alpha = 0.0;
      try {
        std::size_t used = 0;
        alpha = std::stod(item.substr(3), &used);
        if (used != item.size() - 3) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InvalidValueError("bad benchmark weight in '" + item + "'");
      }
      if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidValueError("alpha must lie in [0, 1]");
      out.push_back({"ms", alpha});
    } else {
      throw InvalidValueError("unknown benchmark '" + item + "'");
    }
  }
  return out;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const Instance& inst,
                              const ServiceSetCatalog& cat, const BenchmarkOptions& options) {
  if (spec.kind == "npt") return no_parking_benchmark(inst, cat, options);
  if (spec.kind == "mtsp") return modified_tsp(inst, cat, options);
  return relaxed_ms(inst, cat, spec.alpha, options);
}

}  // namespace parkroute
