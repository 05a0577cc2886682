#include <random>

#include "doctest.h"
#include "parkroute/errors.h"
#include "parkroute/exact.h"
#include "parkroute/heuristic.h"
#include "support/oracles.h"

using namespace parkroute;

namespace {

Instance pair_instance(double p, double w12) {
  Instance inst;
  inst.n = 2;
  inst.drive = Matrix(3, 2.0);
  inst.walk = Matrix(3, w12);
  for (int i = 0; i < 3; ++i) {
    inst.drive(i, i) = 0.0;
    inst.walk(i, i) = 0.0;
  }
  inst.park_time = {0.0, p, p};
  inst.capacity_count = 2;
  inst.parking = {1, 2};
  return inst;
}

std::vector<LocationId> all_customers(int n) {
  std::vector<LocationId> c(n);
  for (int i = 0; i < n; ++i) c[i] = i + 1;
  return c;
}

}  // namespace

TEST_CASE("parking assignment small cases") {
  Instance one = pair_instance(4.0, 1.0);
  one.n = 1;
  one.drive = Matrix(2, 0.0);
  one.walk = Matrix(2, 0.0);
  one.park_time = {0.0, 4.0};
  one.parking = {1};
  ParkingAssignment a = solve_par(one);
  CHECK(a.opened == std::vector<LocationId>{1});
  CHECK(a.objective == 4.0);

  a = solve_par(pair_instance(10.0, 1.0));
  CHECK(a.opened == std::vector<LocationId>{1});
  CHECK(a.objective == 11.0);
  CHECK(a.assign[2] == 1);
  CHECK(a.customers_of(1) == std::vector<LocationId>{1, 2});

  a = solve_par(pair_instance(0.1, 1.0));
  CHECK(a.opened == std::vector<LocationId>{1, 2});
  CHECK(a.objective == doctest::Approx(0.2));
  CHECK(par_objective(pair_instance(0.1, 1.0), {1}) == doctest::Approx(1.1));
}

TEST_CASE("parking assignment equals opening enumeration") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);
    Instance inst = oracle::random_instance(n, 2, seed, 0.5, 25.0);
    if (seed % 4 == 0) inst.parking = {1, 3, n};
    const ParkingAssignment a = solve_par(inst);
    CHECK(a.exact);
    CHECK(a.objective == doctest::Approx(oracle::ufl(inst)).epsilon(1e-12));
    CHECK(par_objective(inst, a.opened) == doctest::Approx(a.objective).epsilon(1e-12));
  }
}

TEST_CASE("parking assignment local search beyond the exact limit") {
  const Instance inst = oracle::random_instance(70, 3, 8, 2.0, 12.0);
  const ParkingAssignment a = solve_par(inst);
  CHECK_FALSE(a.exact);
  CHECK_FALSE(a.opened.empty());
  CHECK(par_objective(inst, a.opened) <= a.objective + 1e-9);
  ParOptions small;
  small.max_exact_customers = 0;
  const Instance mid = oracle::random_instance(9, 2, 3, 1.0, 15.0);
  const ParkingAssignment ls = solve_par(mid, small);
  CHECK(ls.objective >= oracle::ufl(mid) - 1e-9);
}

TEST_CASE("routing") {
  const Instance inst = oracle::random_instance(14, 1, 6, 1.0, 2.0);
  ParkingRoute r = route_parking(inst, {3});
  CHECK(r.order == std::vector<LocationId>{3});
  CHECK(r.drive == doctest::Approx(inst.drive(0, 3) + inst.drive(3, 0)));

  for (int m = 2; m <= 8; ++m) {
    std::vector<LocationId> spots;
    for (int i = 1; i <= m; ++i) spots.push_back(i + 3);
    r = route_parking(inst, spots);
    CHECK(r.exact);
    CHECK(r.drive == doctest::Approx(oracle::tsp(inst, spots)).epsilon(1e-12));
  }

  std::vector<LocationId> thirteen;
  for (int i = 1; i <= 13; ++i) thirteen.push_back(i);
  const ParkingRoute hk = route_parking(inst, thirteen);
  const ParkingRoute ls = route_parking_local_search(inst, thirteen);
  CHECK(hk.exact);
  CHECK_FALSE(ls.exact);
  CHECK(hk.drive <= ls.drive + 1e-9);
  CHECK(route_parking(inst, all_customers(14)).exact == false);
}

TEST_CASE("routing avoids the long edge of a triangle") {
  Instance inst = pair_instance(0.0, 1.0);
  inst.n = 3;
  inst.drive = Matrix(4, 1.0);
  for (int i = 0; i < 4; ++i) inst.drive(i, i) = 0.0;
  inst.drive(1, 2) = inst.drive(2, 1) = 10.0;
  inst.drive(0, 1) = inst.drive(1, 0) = 1.0;
  inst.drive(0, 2) = inst.drive(2, 0) = 1.0;
  inst.drive(1, 3) = inst.drive(3, 1) = 1.0;
  inst.drive(2, 3) = inst.drive(3, 2) = 1.0;
  const ParkingRoute r = route_parking(inst, {1, 2, 3});
  CHECK(r.drive == 4.0);
  CHECK(r.order[1] == 3);
}

TEST_CASE("service set assignment small cases") {
  const Instance inst = oracle::random_instance(4, 2, 1, 1.0, 2.0);
  const ServiceSetCatalog cat = enumerate_catalog(inst);
  SsaResult s = solve_ssa(cat, 1, {3});
  CHECK(s.sets == std::vector<std::vector<LocationId>>{{3}});
  CHECK(s.walk == doctest::Approx(2 * inst.walk(1, 3)));
  s = solve_ssa(cat, 2, {2});
  CHECK(s.walk == 0.0);

  // Euclidean: serving a pair together never costs more than two round trips.
  s = solve_ssa(cat, 1, {3, 4});
  const std::vector<LocationId> pair{3, 4};
  const double together = walk_time(inst, 1, pair);
  const double apart = 2 * inst.walk(1, 3) + 2 * inst.walk(1, 4);
  CHECK(s.walk == doctest::Approx(std::min(together, apart)));
  if (together < apart - 1e-9) CHECK(s.sets.size() == 1);
}

TEST_CASE("service set assignment equals partition brute force") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int q = 1 + trial % 4;
    const Instance inst = oracle::random_instance(8, q, 50 + trial, 1.0, 2.0);
    const ServiceSetCatalog cat = trial % 2 ? reduce_catalog(enumerate_catalog(inst))
                                            : enumerate_catalog(inst);
    std::vector<LocationId> customers = all_customers(8);
    std::shuffle(customers.begin(), customers.end(), rng);
    customers.resize(1 + trial % 6);
    std::sort(customers.begin(), customers.end());
    const LocationId spot = 1 + static_cast<int>(rng() % 8);
    oracle::Rules rules;
    rules.reduced = cat.reduced();
    const SsaResult s = solve_ssa(cat, spot, customers);
    CHECK(s.walk == doctest::Approx(oracle::best_partition(inst, spot, customers, rules))
                        .epsilon(1e-12));
    const SsaResult g = greedy_ssa(cat, spot, customers);
    CHECK(g.walk >= s.walk - 1e-9);
  }
}

TEST_CASE("service set assignment declines huge groups") {
  const Instance inst = oracle::random_instance(24, 2, 3, 1.0, 2.0);
  const ServiceSetCatalog cat = ServiceSetCatalog::rules_only(inst);
  CHECK_THROWS_AS(solve_ssa(cat, 1, all_customers(24)), ResourceError);
  const SsaResult g = greedy_ssa(cat, 1, all_customers(24));
  CHECK_FALSE(g.exact);
  int served = 0;
  for (const auto& set : g.sets) {
    CHECK(set.size() <= 2);
    served += static_cast<int>(set.size());
  }
  CHECK(served == 24);
}

TEST_CASE("heuristic on tiny instances matches the optimum") {
  Instance one = pair_instance(3.0, 1.0);
  one.n = 1;
  one.drive = Matrix(2, 5.0);
  one.drive(0, 0) = one.drive(1, 1) = 0.0;
  one.walk = Matrix(2, 0.0);
  one.park_time = {0.0, 3.0};
  one.parking = {1};
  CHECK(heuristic_solve(one).solution.total == doctest::Approx(13.0));

  const Instance far = pair_instance(0.5, 30.0);
  const HeuristicResult h = heuristic_solve(far);
  CHECK(h.solution.stops.size() == 2);
  CHECK(h.solution.total == doctest::Approx(oracle::cdpp(far)));
}

TEST_CASE("heuristic is feasible and never beats the optimum") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Instance inst = oracle::random_instance(8, 1 + seed % 3, seed, 1.0, 20.0);
    const ServiceSetCatalog cat = enumerate_catalog(inst);
    const HeuristicResult h = heuristic_solve(inst, cat);
    CHECK(check_feasible(inst, cat, h.solution).empty());
    CHECK(evaluate_solution(inst, h.solution).total == doctest::Approx(h.solution.total));
    const ExactResult r = solve_exact(inst, cat);
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(h.solution.total >= r.objective - 1e-9);
  }
}

TEST_CASE("heuristic scales past the exact components") {
  const Instance inst = oracle::random_instance(80, 3, 4, 3.0, 10.0);
  const HeuristicResult h = heuristic_solve(inst);
  CHECK(evaluate_solution(inst, h.solution).feasible());
  CHECK_FALSE(h.assignment.exact);
}
