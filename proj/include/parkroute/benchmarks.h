#pragma once

#include <string>
#include <vector>

#include "parkroute/exact.h"
#include "parkroute/instance.h"
#include "parkroute/service_sets.h"
#include "parkroute/solution.h"

namespace parkroute {

struct BenchmarkOptions {
  SearchBudget budget;
  // Instances up to this size use the exact solver, larger ones the heuristic.
  int exact_max_customers = 12;
  int threads = 1;
};

struct BenchmarkResult {
  std::string name;
  Solution solution;
  double model_objective = 0.0;  // value of the objective the benchmark optimizes, incl. n * f
  double completion = 0.0;       // evaluate_solution(solution).total
  int stops = 0;
  std::string method;            // "exact", "heuristic" or "split"
  bool proven = false;           // model objective optimal for the benchmark's own model
  bool degenerate = false;       // an activity carries zero weight
};

// Optimizes with every p_i set to zero, then charges the true parking times.
BenchmarkResult no_parking_benchmark(const Instance& inst, const ServiceSetCatalog& cat,
                                     const BenchmarkOptions& options = {});

// Driving TSP over all customers fixes the service order; a split over that
// order chooses parking blocks, the spot inside each block, and consecutive
// walking sets. Walking follows the fixed order.
BenchmarkResult modified_tsp(const Instance& inst, const ServiceSetCatalog& cat,
                             const BenchmarkOptions& options = {});

struct SplitResult {
  Solution solution;
  double cost = 0.0;  // includes n * f
};

// The split step of modified_tsp for a given customer order.
SplitResult split_fixed_order(const Instance& inst, const ServiceSetCatalog& cat,
                              const std::vector<LocationId>& order);

// Minimizes alpha * driving + (1 - alpha) * walking (+ n * f); parking time
// is ignored by the model and charged in the completion.
BenchmarkResult relaxed_ms(const Instance& inst, const ServiceSetCatalog& cat, double alpha,
                           const BenchmarkOptions& options = {});

// Parses "npt", "mtsp", "ms:<alpha>" lists such as "npt,mtsp,ms:0.6,ms:0.8".
struct BenchmarkSpec {
  std::string kind;   // "npt", "mtsp" or "ms"
  double alpha = 0.0;
  std::string label() const;
};
std::vector<BenchmarkSpec> parse_benchmark_list(const std::string& text);

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const Instance& inst,
                              const ServiceSetCatalog& cat, const BenchmarkOptions& options = {});

}  // namespace parkroute
