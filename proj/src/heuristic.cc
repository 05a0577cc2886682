#include "parkroute/heuristic.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include "parkroute/errors.h"

namespace parkroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSsaCandidates = 5'000'000;

struct Candidate {
  std::uint32_t mask = 0;
  double cost = 0.0;
};

double set_walk(const ServiceSetCatalog& cat, LocationId spot,
                const std::vector<LocationId>& members) {
  if (cat.materialized()) {
    if (auto j = cat.find(members)) return cat.walk_cost(spot, *j);
  }
  return walk_time(cat.instance(), spot, members);
}

void collect(const ServiceSetCatalog& cat, LocationId spot,
             const std::vector<LocationId>& customers, std::size_t start,
             std::vector<LocationId>& members, std::uint32_t mask, int max_size,
             std::vector<std::vector<Candidate>>& by_low) {
  for (std::size_t t = start; t < customers.size(); ++t) {
    members.push_back(customers[t]);
    const std::uint32_t m2 = mask | (std::uint32_t{1} << t);
    if (cat.fits_capacity(members)) {
      if (cat.admissible(spot, members)) {
        auto& bucket = by_low[std::countr_zero(m2)];
        bucket.push_back({m2, set_walk(cat, spot, members)});
        std::size_t total = 0;
        for (const auto& b : by_low) total += b.size();
        if (bucket.size() % 4096 == 0 && total > kMaxSsaCandidates) {
          throw ResourceError("too many candidate walking sets for one spot");
        }
      }
      if (static_cast<int>(members.size()) < max_size) {
        collect(cat, spot, customers, t + 1, members, m2, max_size, by_low);
      }
    }
    members.pop_back();
  }
}

std::vector<LocationId> members_of(const std::vector<LocationId>& customers, std::uint32_t mask) {
  std::vector<LocationId> out;
  for (std::size_t t = 0; t < customers.size(); ++t) {
    if (mask & (std::uint32_t{1} << t)) out.push_back(customers[t]);
  }
  return out;
}

}  // namespace

SsaResult solve_ssa(const ServiceSetCatalog& cat, LocationId spot,
                    const std::vector<LocationId>& customers_in) {
  std::vector<LocationId> customers = customers_in;
  std::sort(customers.begin(), customers.end());
  const int r = static_cast<int>(customers.size());
  if (r > kMaxExactSsaCustomers) {
    throw ResourceError("exact walking partition handles at most " +
                        std::to_string(kMaxExactSsaCustomers) + " customers per spot");
  }
  SsaResult result;
  if (r == 0) return result;
  const Instance& inst = cat.instance();
  int max_size = std::min(r, kMaxExactWalkSetSize);
  if (inst.capacity_count) max_size = std::min(max_size, *inst.capacity_count);

  std::vector<std::vector<Candidate>> by_low(r);
  std::vector<LocationId> members;
  collect(cat, spot, customers, 0, members, 0, max_size, by_low);

  const std::uint32_t full = (std::uint32_t{1} << r) - 1;
  std::vector<double> best(static_cast<std::size_t>(full) + 1, kInf);
  std::vector<int> pick(static_cast<std::size_t>(full) + 1, -1);
  best[0] = 0.0;
  // best[mask]: cheapest partition of mask. The set covering its lowest
  // customer is chosen first, so each partition is generated once.
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const auto& bucket = by_low[std::countr_zero(mask)];
    double b = kInf;
    int arg = -1;
    for (int c = 0; c < static_cast<int>(bucket.size()); ++c) {
      const Candidate& cand = bucket[c];
      if (cand.mask & ~mask) continue;
      const double value = cand.cost + best[mask ^ cand.mask];
      if (value < b) {
        b = value;
        arg = c;
      }
    }
    best[mask] = b;
    pick[mask] = arg;
  }
  if (best[full] == kInf) {
    throw InfeasibleError("customers at spot " + std::to_string(spot) +
                          " cannot be partitioned into admissible sets");
  }
  for (std::uint32_t mask = full; mask;) {
    const Candidate& cand = by_low[std::countr_zero(mask)][pick[mask]];
    const std::vector<LocationId> set = members_of(customers, cand.mask);
    result.sets.push_back(walk_tour(inst, spot, set).order);
    mask ^= cand.mask;
  }
  result.walk = best[full];
  return result;
}

SsaResult greedy_ssa(const ServiceSetCatalog& cat, LocationId spot,
                     const std::vector<LocationId>& customers) {
  const Instance& inst = cat.instance();
  std::vector<LocationId> left(customers.begin(), customers.end());
  std::sort(left.begin(), left.end());
  std::vector<LocationId> walk_order;
  LocationId cur = spot;
  while (!left.empty()) {
    auto next = left.begin();
    for (auto it = left.begin(); it != left.end(); ++it) {
      if (inst.walk(cur, *it) < inst.walk(cur, *next)) next = it;
    }
    cur = *next;
    walk_order.push_back(cur);
    left.erase(next);
  }
  SsaResult result;
  result.exact = false;
  std::vector<LocationId> group;
  auto flush = [&] {
    if (group.empty()) return;
    WalkTour tour = walk_tour(inst, spot, group);
    result.walk += tour.minutes;
    result.sets.push_back(std::move(tour.order));
    group.clear();
  };
  for (LocationId c : walk_order) {
    std::vector<LocationId> trial = group;
    trial.push_back(c);
    std::sort(trial.begin(), trial.end());
    if (static_cast<int>(trial.size()) > kMaxExactWalkSetSize || !cat.admissible(spot, trial)) {
      flush();
      group.push_back(c);
    } else {
      group = std::move(trial);
    }
  }
  flush();
  return result;
}

HeuristicResult heuristic_solve(const Instance& inst, const ServiceSetCatalog& cat,
                                const ParOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  HeuristicResult result;
  result.assignment = solve_par(inst, options);
  const ParkingRoute route = route_parking(inst, result.assignment.opened);
  result.route_drive = route.drive;
  result.routing_exact = route.exact;
  for (LocationId spot : route.order) {
    const std::vector<LocationId> customers = result.assignment.customers_of(spot);
    SsaResult ssa;
    try {
      ssa = solve_ssa(cat, spot, customers);
    } catch (const ResourceError&) {
      ssa = greedy_ssa(cat, spot, customers);
    }
    result.ssa_exact = result.ssa_exact && ssa.exact;
    result.solution.stops.push_back({spot, std::move(ssa.sets)});
  }
  cost_solution(inst, result.solution);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

HeuristicResult heuristic_solve(const Instance& inst) {
  return heuristic_solve(inst, ServiceSetCatalog::rules_only(inst));
}

}  // namespace parkroute
