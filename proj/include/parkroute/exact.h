#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parkroute/instance.h"
#include "parkroute/service_sets.h"
#include "parkroute/solution.h"

namespace parkroute {

struct SearchBudget {
  std::int64_t max_nodes = 10'000'000;
  double max_seconds = 300.0;
  // When false the search stops after the root bound and the first
  // incumbent, returning kFeasible unless they already meet.
  bool require_proof = true;
};

// Multipliers on the three time components of the objective. Loading time is
// a constant n * f and is never weighted.
struct ObjectiveWeights {
  double drive = 1.0;
  double park = 1.0;
  double walk = 1.0;
};

struct ExactOptions {
  SearchBudget budget;
  ObjectiveWeights weights;
  // Structural requirements, each satisfied by some optimal solution on
  // metric instances.
  bool claim3 = false;       // a stop at customer i serves a set containing i
  bool claim4 = false;       // a stop at customer i serves {i}
  bool corollary1 = false;   // aggregated claim4; same feasible stops
  bool claim5 = false;       // every stop serves at least one set
  bool corollary3 = false;   // #stops <= #sets
  bool var_reduction = false;
  int threads = 1;           // 1 = deterministic single-thread search
};

enum class SolveStatus { kOptimal = 0, kFeasible = 2, kInfeasible = 3, kTimeout = 4 };

int exit_code(SolveStatus status);
const char* status_name(SolveStatus status);

struct ExactResult {
  SolveStatus status = SolveStatus::kTimeout;
  std::optional<Solution> solution;  // costed with true (unweighted) times
  double objective = 0.0;            // weighted objective of `solution`, incl. n * f
  double bound = 0.0;                // valid lower bound on the weighted objective
  std::int64_t nodes = 0;
  double seconds = 0.0;
};

inline constexpr int kMaxExactCustomers = 16;

// Branch and bound over (next stop, customers served there). Each stop is
// visited at most once; among equal-cost optima the one with fewer stops,
// then the lexicographically smallest (stop, served customers) sequence, is
// returned. Throws UnsupportedError above kMaxExactCustomers and
// InfeasibleError when some customer has no admissible (stop, set) pair.
ExactResult solve_exact(const Instance& inst, const ServiceSetCatalog& cat,
                        const ExactOptions& options = {});

// Coverage, capacity, catalog admissibility, parking membership, walking
// order consistency and stop distinctness. Empty result means feasible.
std::vector<std::string> check_feasible(const Instance& inst, const ServiceSetCatalog& cat,
                                        const Solution& sol);

}  // namespace parkroute
