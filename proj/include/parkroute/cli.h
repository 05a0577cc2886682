#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parkroute/exact.h"
#include "parkroute/gridlab.h"
#include "parkroute/instance.h"
#include "parkroute/model.h"

namespace parkroute {

struct RunConfig {
  std::string command;  // gen, solve, benchmark, grid, export-lp, report
  std::vector<std::string> instances;
  std::string method = "exact";  // exact | heuristic
  std::string benchmarks = "npt,mtsp,ms:0.6,ms:0.8";
  std::string output;            // file, or directory for several instances
  std::string format = "json";   // json | text
  SearchBudget budget;
  int jobs = 1;
  int threads = 1;
  ModelOptions model;            // also selects the exact solver's requirements

  // gen
  bool grid = false;
  GeoParams geo;
  GridParams grid_params;
  bool depot_at_origin = true;

  // grid
  int q = 2;
  double sweep_from = 0.0;
  double sweep_step = 0.1;
  double sweep_to = 3.0;
  int oracle_max_customers = 4;

  // report
  bool threshold_curve = false;
  std::optional<LocationId> catalog_spot;
  bool catalog = false;
};

// Executes one command. Results go to `out` (or files), diagnostics to
// `err`. Returns the process exit code: 0 success / proven optimum, 2
// feasible without proof, 3 infeasible, 4 no incumbent within budget, 1 any
// other failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a RunConfig and runs it. PARKROUTE_BUDGET_SECONDS sets the
// default search time limit.
int run_cli(int argc, char** argv);

}  // namespace parkroute
