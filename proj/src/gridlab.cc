#include "parkroute/gridlab.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "parkroute/errors.h"
#include "parkroute/service_sets.h"

namespace parkroute {

namespace {

constexpr int kMinDistance = 2;  // depot (0,0) to customer (1,1)

struct Cell {
  int a;
  int b;
};

Solution park_along(const GridParams& gp, const std::vector<Cell>& path) {
  Solution sol;
  for (const Cell& c : path) {
    const LocationId id = grid_customer(gp.sqrt_n, c.a, c.b);
    sol.stops.push_back({id, {{id}}});
  }
  return sol;
}

void costed(const GridParams& gp, Solution& sol) {
  const GridInstance grid = gen_grid_instance(gp);
  cost_solution(grid.instance, sol);
}

// Row 1 left to right, then columns sqrt_n..2 alternating up and down over
// rows 2..top, then column 1 from top down to row 2.
std::vector<Cell> boustrophedon(int sqrt_n, int top) {
  std::vector<Cell> path;
  for (int a = 1; a <= sqrt_n; ++a) path.push_back({a, 1});
  bool up = true;
  for (int a = sqrt_n; a >= 2; --a, up = !up) {
    for (int t = 0; t < top - 1; ++t) path.push_back({a, up ? 2 + t : top - t});
  }
  for (int b = top; b >= 2; --b) path.push_back({1, b});
  return path;
}

}  // namespace

void check_grid(const GridParams& gp) {
  if (gp.sqrt_n < 2 || gp.sqrt_n % 2 != 0) {
    throw InvalidValueError("grid side must be an even integer >= 2, got " +
                            std::to_string(gp.sqrt_n));
  }
  if (!(gp.block_len > 0) || !(gp.drive_rate > 0) || !(gp.walk_rate > 0)) {
    throw InvalidValueError("block length and rates must be positive");
  }
  if (gp.walk_rate < gp.drive_rate) {
    throw InvalidValueError("walking rate must be at least the driving rate");
  }
  if (gp.park_time < 0 || gp.load < 0) {
    throw InvalidValueError("parking and loading times must be non-negative");
  }
  if (gp.capacity < 1) throw InvalidValueError("capacity must be at least 1");
}

LocationId grid_customer(int sqrt_n, int a, int b) { return (b - 1) * sqrt_n + a; }

GridInstance gen_grid_instance(const GridParams& gp, bool depot_at_origin) {
  check_grid(gp);
  const int side = gp.sqrt_n;
  GridInstance out;
  Instance& inst = out.instance;
  inst.n = gp.n();
  inst.coords.resize(inst.n + 1);
  const double depot = depot_at_origin ? 0.0 : side + 1.0;
  std::vector<Cell> cells(inst.n + 1, {static_cast<int>(depot), static_cast<int>(depot)});
  for (int b = 1; b <= side; ++b) {
    for (int a = 1; a <= side; ++a) cells[grid_customer(side, a, b)] = {a, b};
  }
  for (int i = 0; i <= inst.n; ++i) {
    inst.coords[i] = {cells[i].a * gp.block_len, cells[i].b * gp.block_len};
  }
  inst.drive = Matrix(inst.n + 1);
  inst.walk = Matrix(inst.n + 1);
  out.min_distance = -1;
  for (int i = 0; i <= inst.n; ++i) {
    for (int k = 0; k <= inst.n; ++k) {
      const int blocks = std::abs(cells[i].a - cells[k].a) + std::abs(cells[i].b - cells[k].b);
      inst.drive(i, k) = blocks * gp.block_len * gp.drive_rate;
      inst.walk(i, k) = blocks * gp.block_len * gp.walk_rate;
      if (i == 0 && k > 0 && (out.min_distance < 0 || blocks < out.min_distance)) {
        out.min_distance = blocks;
      }
    }
  }
  inst.park_time.assign(inst.n + 1, gp.park_time);
  inst.park_time[0] = 0.0;
  inst.capacity_count = gp.capacity;
  inst.load_per_package = gp.load;
  for (int c = 1; c <= inst.n; ++c) inst.parking.push_back(c);
  inst.name = "grid-" + std::to_string(side) + "x" + std::to_string(side);
  return out;
}

double tsp_park_all_value(const GridParams& gp) {
  check_grid(gp);
  const double n = gp.n();
  return (2.0 * kMinDistance + n) * gp.drive_rate * gp.block_len + n * gp.load +
         n * gp.park_time;
}

Solution tsp_park_all_solution(const GridParams& gp) {
  check_grid(gp);
  Solution sol = park_along(gp, boustrophedon(gp.sqrt_n, gp.sqrt_n));
  costed(gp, sol);
  return sol;
}

double threshold_p(int q, const GridParams& gp) {
  if (q == 1 || q == 2) return gp.block_len * (2.0 * gp.walk_rate - gp.drive_rate);
  if (q == 3) return gp.block_len * (4.0 / 3.0 * gp.walk_rate - gp.drive_rate);
  throw UnsupportedError("no parking-time threshold is known for capacity " + std::to_string(q));
}

Solution construct_q2(const GridParams& gp) {
  check_grid(gp);
  const int side = gp.sqrt_n;
  if (side < 4) {
    throw UnsupportedError("the walking-top-row construction needs a grid side of at least 4");
  }
  Solution sol = park_along(gp, boustrophedon(side, side - 1));
  for (Stop& stop : sol.stops) {
    const int a = (stop.location - 1) % side + 1;
    const int b = (stop.location - 1) / side + 1;
    if (b == side - 1) stop.sets.push_back({grid_customer(side, a, side)});
  }
  costed(gp, sol);
  return sol;
}

double construct_q2_value(const GridParams& gp) {
  const double n = gp.n();
  const double side = gp.sqrt_n;
  return (2.0 * kMinDistance + n - side) * gp.drive_rate * gp.block_len +
         (n - side) * gp.park_time + 2.0 * gp.walk_rate * gp.block_len * side + n * gp.load;
}

Solution construct_q3(const GridParams& gp) {
  check_grid(gp);
  const int s = gp.sqrt_n;
  if (s < 6) throw UnsupportedError("the corner-triple construction needs a grid side of at least 6");
  if (gp.capacity < 3) throw UnsupportedError("the corner-triple construction needs capacity 3");
  std::vector<Cell> path;
  for (int a = 1; a <= s; ++a) path.push_back({a, 1});
  for (int i = 1; i <= (s - 4) / 2; ++i) {
    for (int a = s; a >= 2; --a) path.push_back({a, 2 * i});
    for (int a = 2; a <= s; ++a) path.push_back({a, 2 * i + 1});
  }
  path.push_back({s, s - 2});
  path.push_back({s - 1, s - 2});
  const std::size_t first_walk = path.size();
  path.push_back({s - 1, s - 1});
  path.push_back({s - 2, s - 1});
  path.push_back({s - 2, s - 2});
  path.push_back({s - 3, s - 2});
  for (int i = 1; i <= (s - 4) / 2; ++i) {
    const int up = s - 2 - 2 * i;
    for (int b = s - 2; b <= s; ++b) path.push_back({up, b});
    for (int b = s; b >= s - 2; --b) path.push_back({up - 1, b});
  }
  for (int b = s - 3; b >= 2; --b) path.push_back({1, b});

  Solution sol = park_along(gp, path);
  auto id = [s](int a, int b) { return grid_customer(s, a, b); };
  sol.stops[first_walk].sets.push_back({id(s - 1, s), id(s, s), id(s, s - 1)});
  sol.stops[first_walk + 1].sets.push_back({id(s - 2, s), id(s - 3, s), id(s - 3, s - 1)});
  costed(gp, sol);
  return sol;
}

double construct_q3_value(const GridParams& gp) {
  const double n = gp.n();
  return (2.0 * kMinDistance + n - 6.0) * gp.block_len * gp.drive_rate +
         (n - 6.0) * gp.park_time + 8.0 * gp.block_len * gp.walk_rate + n * gp.load;
}

const char* regime_name(Regime r) {
  return r == Regime::kTspOptimal ? "tsp_optimal" : "tsp_suboptimal";
}

namespace {

ThresholdReport analyze(GridParams gp, int q, const GridAnalysisOptions& options) {
  gp.capacity = q;
  check_grid(gp);
  ThresholdReport rep;
  rep.gp = gp;
  rep.q = q;
  rep.threshold = threshold_p(q, gp);
  rep.predicted = gp.park_time <= rep.threshold + 1e-12 ? Regime::kTspOptimal
                                                        : Regime::kTspSuboptimal;
  rep.tsp_value = tsp_park_all_value(gp);
  const double strict = rep.tsp_value - 1e-9;

  std::optional<Solution> built;
  if (q <= 2 && gp.sqrt_n >= 4) built = construct_q2(gp);
  if (q == 3 && gp.sqrt_n >= 6) built = construct_q3(gp);
  if (built && built->total < strict) {
    rep.witness_value = built->total;
    rep.witness = std::move(built);
    rep.witness_source = "construction";
  }

  if (gp.n() <= options.oracle_max_customers) {
    const GridInstance grid = gen_grid_instance(gp);
    const ServiceSetCatalog cat = enumerate_catalog(grid.instance);
    ExactOptions eo;
    eo.budget = options.budget;
    const ExactResult r = solve_exact(grid.instance, cat, eo);
    rep.oracle_status = r.status;
    if (r.solution) {
      rep.oracle_value = r.objective;
      if (r.objective < strict && !rep.witness) {
        rep.witness_value = r.objective;
        rep.witness = r.solution;
        rep.witness_source = "oracle";
      }
    }
    if (r.status == SolveStatus::kOptimal) {
      rep.certified = true;
      rep.regime = r.objective < strict ? Regime::kTspSuboptimal : Regime::kTspOptimal;
      return rep;
    }
  }
  if (rep.witness) {
    rep.regime = Regime::kTspSuboptimal;
    rep.certified = true;
  } else {
    rep.regime = rep.predicted;
  }
  return rep;
}

}  // namespace

std::vector<ThresholdReport> verify_claims(const std::vector<GridParams>& points, int q,
                                           const GridAnalysisOptions& options) {
  std::vector<ThresholdReport> out(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      out[i] = analyze(points[i], q, options);
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(points.size())));
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

std::vector<GridParams> p_sweep(const GridParams& base, double from, double step, double to) {
  if (!(step > 0)) throw InvalidValueError("sweep step must be positive");
  if (to < from) throw InvalidValueError("sweep end lies before its start");
  std::vector<GridParams> out;
  const long count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long k = 0; k <= count; ++k) {
    GridParams gp = base;
    gp.park_time = from + k * step;
    out.push_back(gp);
  }
  return out;
}

std::string threshold_csv(const std::vector<ThresholdReport>& reports) {
  std::ostringstream out;
  out << "p,threshold,tsp_value,oracle_value,witness_value,regime\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const ThresholdReport& r : reports) {
    out << num(r.gp.park_time) << "," << num(r.threshold) << "," << num(r.tsp_value) << ","
        << (r.oracle_value ? num(*r.oracle_value) : "") << ","
        << (r.witness_value ? num(*r.witness_value) : "") << "," << regime_name(r.regime)
        << "\n";
  }
  return out.str();
}

}  // namespace parkroute
