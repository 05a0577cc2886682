#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parkroute/exact.h"
#include "parkroute/instance.h"
#include "parkroute/solution.h"

namespace parkroute {

// A sqrt_n x sqrt_n grid of customers one block apart, with rectilinear
// driving and walking.
struct GridParams {
  int sqrt_n = 2;
  double block_len = 1.0;   // distance units per block
  double drive_rate = 1.0;  // minutes per distance unit
  double walk_rate = 1.0;   // minutes per distance unit, >= drive_rate
  double park_time = 0.0;
  double load = 0.0;
  int capacity = 2;

  int n() const { return sqrt_n * sqrt_n; }
};

// Throws InvalidValueError for odd or non-positive sizes, negative values or
// walk_rate < drive_rate.
void check_grid(const GridParams& gp);

struct GridInstance {
  Instance instance;
  int min_distance = 0;  // blocks from the depot to the nearest customer
};

// Customer (a, b), 1 <= a, b <= sqrt_n, has id (b - 1) * sqrt_n + a and sits
// at (a, b) blocks. The depot is at (0, 0), or at (sqrt_n + 1, sqrt_n + 1)
// when depot_at_origin is false.
GridInstance gen_grid_instance(const GridParams& gp, bool depot_at_origin = true);
LocationId grid_customer(int sqrt_n, int a, int b);

// Park at every customer along a boustrophedon tour entering at (1, 1).
double tsp_park_all_value(const GridParams& gp);
Solution tsp_park_all_solution(const GridParams& gp);

// Largest parking time for which parking everywhere stays optimal; q in 1..3.
double threshold_p(int q, const GridParams& gp);

// Park along a Hamiltonian path of the lower sqrt_n - 1 rows and walk to each
// top-row customer from below. Needs sqrt_n >= 4.
Solution construct_q2(const GridParams& gp);
double construct_q2_value(const GridParams& gp);

// Park at n - 6 customers and serve two corner triples on foot. Needs
// sqrt_n >= 6 and capacity >= 3.
Solution construct_q3(const GridParams& gp);
double construct_q3_value(const GridParams& gp);

enum class Regime { kTspOptimal, kTspSuboptimal };
const char* regime_name(Regime r);

struct ThresholdReport {
  GridParams gp;
  int q = 2;
  double threshold = 0.0;
  Regime predicted = Regime::kTspOptimal;  // from comparing p with the threshold
  Regime regime = Regime::kTspOptimal;     // observed
  bool certified = false;                  // observed regime proven by oracle or witness
  double tsp_value = 0.0;
  std::optional<double> oracle_value;
  std::optional<SolveStatus> oracle_status;
  std::optional<double> witness_value;
  std::optional<Solution> witness;
  std::string witness_source;  // "construction", "oracle" or empty

  bool agrees() const { return regime == predicted; }
};

struct GridAnalysisOptions {
  SearchBudget budget;
  int oracle_max_customers = 4;
  int jobs = 1;
};

// For every parameter point: the park-everywhere value, the exact optimum
// when the grid is small enough, and a constructed witness where one exists.
std::vector<ThresholdReport> verify_claims(const std::vector<GridParams>& points, int q,
                                           const GridAnalysisOptions& options = {});

// Points base with park_time = from, from + step, ..., <= to (+1e-9).
std::vector<GridParams> p_sweep(const GridParams& base, double from, double step, double to);

// CSV: p,threshold,tsp_value,oracle_value,witness_value,regime
std::string threshold_csv(const std::vector<ThresholdReport>& reports);

}  // namespace parkroute
