// Acceptance criteria AC1..AC8. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "parkroute/benchmarks.h"
#include "parkroute/errors.h"
#include "parkroute/exact.h"
#include "parkroute/gridlab.h"
#include "parkroute/heuristic.h"
#include "parkroute/model.h"
#include "parkroute/published.h"
#include "support/oracles.h"

using namespace parkroute;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::ostringstream failures;
  void fail(const std::string& why) {
    pass = false;
    failures << why << "; ";
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// The 20 random metric instances shared by AC4 and AC5.
std::vector<Instance> corpus_small() {
  std::vector<Instance> out;
  const double p_hi[] = {2.0, 8.0, 20.0, 40.0};
  for (int k = 0; k < 20; ++k) {
    const int n = 5 + k % 4;
    const int q = 1 + k % 3;
    out.push_back(oracle::random_instance(n, q, 1000 + k, 0.0, p_hi[k % 4]));
  }
  return out;
}

double optimum(const Instance& inst, const ServiceSetCatalog& cat, const ExactOptions& eo = {}) {
  const ExactResult r = solve_exact(inst, cat, eo);
  if (r.status != SolveStatus::kOptimal) throw Error("oracle did not prove optimality");
  return r.objective;
}

void ac1(Outcome& o) {
  const std::int64_t full[] = {2'500, 63'750, 1'043'750, 12'558'750};
  const std::int64_t reduced[] = {2'500, 61'300, 982'500, 11'576'300};
  for (int q = 1; q <= 4; ++q) {
    GeoParams gp;
    gp.n = 50;
    gp.capacity = q;
    const Instance inst = gen_geo_instance(gp);
    std::int64_t y = 0, y_hat = 0;
    if (q <= 3) {
      const ServiceSetCatalog cat = enumerate_catalog(inst);
      const ServiceSetCatalog red = reduce_catalog(cat);
      const ReductionStats st = red.reduction_stats();
      y = st.full_pairs;
      y_hat = st.remaining_pairs();
      ModelOptions opts;
      opts.var_reduction = true;
      const std::int64_t vars = model_size(inst, red, opts).service_vars;
      o.expect(vars == y_hat, "q=" + std::to_string(q) + " model y vars " + std::to_string(vars));
    } else {
      y = static_cast<std::int64_t>(count_pairs(50, q));
      y_hat = y - static_cast<std::int64_t>(count_removed_pairs(50, q));
    }
    o.detail << "q=" << q << " |Y|=" << y << " |Y^|=" << y_hat << " ";
    o.expect(y == full[q - 1], "q=" + std::to_string(q) + " |Y| " + std::to_string(y));
    o.expect(y_hat == reduced[q - 1], "q=" + std::to_string(q) + " |Y^| " + std::to_string(y_hat));
  }
}

void ac2(Outcome& o) {
  GridParams gp;
  gp.sqrt_n = 2;
  gp.capacity = 2;
  gp.walk_rate = 1.6;
  const double thr = threshold_p(2, gp);
  o.expect(std::abs(thr - 2.2) < 1e-12, "threshold " + num(thr));
  for (double p : {0.0, 1.0, 2.0, 2.2, 2.3, 3.0}) {
    gp.park_time = p;
    const Instance inst = gen_grid_instance(gp).instance;
    const double opt = optimum(inst, enumerate_catalog(inst));
    const double tour = 8.0 + 4.0 * p;
    o.detail << "p=" << p << " opt=" << num(opt) << " tour=" << num(tour) << " ";
    if (p <= 2.2 + 1e-12) {
      o.expect(std::abs(opt - tour) <= 1e-6,
               "p=" + num(p) + " optimum " + num(opt) + " != " + num(tour));
    } else {
      o.expect(opt < tour - 1e-9, "p=" + num(p) + " optimum " + num(opt) + " not below " + num(tour));
    }
  }
}

void ac3(Outcome& o) {
  GridParams gp;
  gp.sqrt_n = 6;
  gp.capacity = 3;
  gp.park_time = threshold_p(3, gp) + 0.01;
  const Instance inst = gen_grid_instance(gp).instance;
  const Solution s = construct_q3(gp);
  const Evaluation ev = evaluate_solution(inst, s);
  const double formula = 34.0 + 30.0 * gp.park_time + 8.0;
  o.detail << "p=" << num(gp.park_time) << " witness=" << num(ev.total)
           << " tsp=" << num(tsp_park_all_value(gp));
  o.expect(ev.feasible(), "witness infeasible");
  o.expect(check_feasible(inst, enumerate_catalog(inst), s).empty(), "witness not admissible");
  o.expect(std::abs(ev.total - formula) <= 1e-9, "witness " + num(ev.total) + " != " + num(formula));
  o.expect(ev.total < tsp_park_all_value(gp), "witness does not beat the tour");
}

void ac4(Outcome& o) {
  int checked = 0;
  for (const Instance& inst : corpus_small()) {
    const ServiceSetCatalog full = enumerate_catalog(inst);
    const ServiceSetCatalog red = reduce_catalog(full);
    const double base = optimum(inst, full);
    ExactOptions variants[6];
    variants[0].claim3 = true;
    variants[1].claim4 = true;
    variants[2].corollary1 = true;
    variants[3].claim5 = true;
    variants[4].corollary3 = true;
    variants[5].var_reduction = true;
    const char* names[] = {"claim3", "claim4", "corollary1", "claim5", "corollary3", "reduced"};
    for (int v = 0; v < 6; ++v) {
      const double val = optimum(inst, variants[v].var_reduction ? red : full, variants[v]);
      o.expect(std::abs(val - base) <= 1e-6,
               inst.name + " " + names[v] + " " + num(val) + " vs " + num(base));
      ++checked;
    }
  }
  o.detail << checked << " option runs on 20 instances";
}

void ac5(Outcome& o) {
  int rows = 0;
  double worst_npt = 0;
  for (const Instance& inst : corpus_small()) {
    const ServiceSetCatalog cat = enumerate_catalog(inst);
    const double opt = optimum(inst, cat);
    for (const BenchmarkSpec& spec : parse_benchmark_list("npt,mtsp,ms:0.6,ms:0.8")) {
      const BenchmarkResult r = run_benchmark(spec, inst, cat);
      const Evaluation ev = evaluate_solution(inst, r.solution);
      o.expect(ev.feasible(), inst.name + " " + r.name + " infeasible");
      o.expect(std::abs(ev.breakdown.total() - r.completion) <= 1e-9,
               inst.name + " " + r.name + " breakdown does not add up");
      o.expect(r.completion >= opt - 1e-9,
               inst.name + " " + r.name + " completion " + num(r.completion) + " < " + num(opt));
      if (spec.kind == "npt") worst_npt = std::max(worst_npt, r.completion / opt - 1);
      ++rows;
    }
    Instance free = inst;
    std::fill(free.park_time.begin(), free.park_time.end(), 0.0);
    const ServiceSetCatalog free_cat = enumerate_catalog(free);
    const BenchmarkResult npt = no_parking_benchmark(free, free_cat);
    const double free_opt = optimum(free, free_cat);
    o.expect(std::abs(npt.completion - free_opt) <= 1e-9,
             inst.name + " no-parking with p=0 " + num(npt.completion) + " != " + num(free_opt));
  }
  o.detail << rows << " benchmark rows, worst no-parking excess " << num(100 * worst_npt) << "%";
  if (const char* dir = std::getenv("PARKROUTE_PUBLISHED_DIR"); dir && published_loader_enabled()) {
    o.detail << "; published-data check (informative): ";
    try {
      const Instance pub = load_instance_file(dir);
      const HeuristicResult h = heuristic_solve(pub);
      o.detail << pub.name << " heuristic total " << num(h.solution.total);
    } catch (const std::exception& e) {
      o.detail << "not run (" << e.what() << ")";
    }
  }
}

void ac6(Outcome& o) {
  double gap_sum = 0, gap_max = 0;
  int ssa_checks = 0;
  std::mt19937_64 rng(77);
  for (int k = 0; k < 20; ++k) {
    const int n = 6 + k % 5;
    const int q = 1 + k % 3;
    const Instance inst = oracle::random_instance(n, q, 2000 + k, 0.5, 5.0 + 2.0 * k);
    const ServiceSetCatalog cat = enumerate_catalog(inst);
    const HeuristicResult h = heuristic_solve(inst, cat);
    o.expect(check_feasible(inst, cat, h.solution).empty(), inst.name + " heuristic infeasible");
    const double opt = optimum(inst, cat);
    const double gap = h.solution.total / opt - 1.0;
    gap_sum += gap;
    gap_max = std::max(gap_max, gap);

    const double ufl = oracle::ufl(inst);
    o.expect(std::abs(h.assignment.objective - ufl) <= 1e-9,
             inst.name + " parking assignment " + num(h.assignment.objective) + " vs " + num(ufl));

    for (LocationId spot : h.assignment.opened) {
      const auto ks = h.assignment.customers_of(spot);
      if (ks.size() > 6) continue;
      const SsaResult s = solve_ssa(cat, spot, ks);
      const double brute = oracle::best_partition(inst, spot, ks);
      o.expect(std::abs(s.walk - brute) <= 1e-9, inst.name + " SSA at " + std::to_string(spot));
      ++ssa_checks;
    }
    // Random customer groups up to six at a random spot.
    std::vector<LocationId> all(n);
    for (int i = 0; i < n; ++i) all[i] = i + 1;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<LocationId> ks(all.begin(), all.begin() + std::min(n, 6));
    std::sort(ks.begin(), ks.end());
    const LocationId spot = all.back();
    o.expect(std::abs(solve_ssa(cat, spot, ks).walk - oracle::best_partition(inst, spot, ks)) <=
                 1e-9,
             inst.name + " SSA random group");
    ++ssa_checks;
  }
  const double mean = gap_sum / 20;
  o.detail << "mean gap " << num(100 * mean) << "%, max gap " << num(100 * gap_max) << "%, "
           << ssa_checks << " SSA checks";
  o.expect(mean <= 0.15, "mean gap above 15%");
  o.expect(gap_max <= 0.30, "max gap above 30%");
}

void ac7(Outcome& o) {
  std::mt19937_64 rng(99);
  int walks = 0, splits = 0, exacts = 0;
  for (int k = 0; k < 60; ++k) {
    const Instance inst = oracle::random_instance(8, 3, 3000 + k, 0.0, 10.0);
    std::vector<LocationId> all{1, 2, 3, 4, 5, 6, 7, 8};
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<LocationId> set(all.begin(), all.begin() + 1 + k % 6);
    std::sort(set.begin(), set.end());
    const LocationId spot = all.back();
    const double got = walk_time(inst, spot, set);
    const double want = oracle::walk(inst, spot, set);
    o.expect(std::abs(got - want) <= 1e-9, "walk " + inst.name);
    ++walks;
  }
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + k % 7;
    const Instance inst = oracle::random_instance(n, 1 + k % 3, 4000 + k, 0.0, 15.0);
    const ServiceSetCatalog cat = enumerate_catalog(inst);
    std::vector<LocationId> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    const double got = split_fixed_order(inst, cat, order).cost;
    const double want = oracle::split(inst, order);
    o.expect(std::abs(got - want) <= 1e-9, "split " + inst.name + " " + num(got) + " vs " + num(want));
    ++splits;
  }
  for (int k = 0; k < 30; ++k) {
    const int n = 1 + k % 5;
    Instance inst = oracle::random_instance(n, 1 + k % 3, 5000 + k, 0.0, 25.0);
    inst.load_per_package = 0.1 * (k % 4);
    const double got = optimum(inst, enumerate_catalog(inst));
    const double want = oracle::cdpp(inst);
    o.expect(std::abs(got - want) <= 1e-9,
             "exact " + inst.name + " " + num(got) + " vs " + num(want));
    ++exacts;
  }
  o.detail << walks << " walk, " << splits << " split, " << exacts << " exact comparisons";
}

void ac8(Outcome& o) {
  GridParams gp;
  gp.walk_rate = 20.0;
  gp.drive_rate = 12.5;
  struct Row {
    double l, q2, q3;
  };
  for (const Row& r : {Row{0.07, 1.925, 0.992}, Row{0.29, 7.975, 4.108}}) {
    gp.block_len = r.l;
    const double a = threshold_p(2, gp);
    const double b = threshold_p(3, gp);
    o.detail << "l=" << r.l << " q<=2 " << num(a) << " q=3 " << num(b) << " ";
    o.expect(std::abs(a - r.q2) <= 1e-3, "q<=2 threshold at l=" + num(r.l));
    o.expect(std::abs(threshold_p(1, gp) - r.q2) <= 1e-3, "q=1 threshold at l=" + num(r.l));
    o.expect(std::abs(b - r.q3) <= 1e-3, "q=3 threshold at l=" + num(r.l));
  }
  gp.block_len = 0.07;
  o.expect(std::lround(threshold_p(3, gp)) == 1, "urban q=3 threshold does not round to 1");
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    double limit_seconds;
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {{"AC1", 30, ac1},  {"AC2", 60, ac2},  {"AC3", 1, ac3},
                                {"AC4", 300, ac4}, {"AC5", 300, ac5}, {"AC6", 300, ac6},
                                {"AC7", 300, ac7}, {"AC8", 1, ac8}};
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > c.limit_seconds) o.fail("took " + num(secs) + " s, limit " + num(c.limit_seconds));
    std::cout << c.id << " " << (o.pass ? "PASS" : "FAIL") << " (" << num(secs) << " s) "
              << o.detail.str();
    if (!o.pass) std::cout << "| failed: " << o.failures.str();
    std::cout << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
