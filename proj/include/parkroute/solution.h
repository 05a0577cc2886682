#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "parkroute/instance.h"

namespace parkroute {

// One parking event. Each entry of `sets` is a service set listed in the
// order the delivery person walks it.
struct Stop {
  LocationId location = kDepot;
  std::vector<std::vector<LocationId>> sets;

  bool operator==(const Stop&) const = default;
};

struct Breakdown {
  double park = 0.0;
  double drive = 0.0;
  double walk = 0.0;
  double load = 0.0;

  double total() const { return park + drive + walk + load; }
  bool operator==(const Breakdown&) const = default;
};

// A tour depot -> stops -> depot. `breakdown` and `total` are filled by
// cost_solution / the solvers.
struct Solution {
  std::vector<Stop> stops;
  Breakdown breakdown;
  double total = 0.0;

  int stop_count() const { return static_cast<int>(stops.size()); }
  int set_count() const;
  bool operator==(const Solution&) const = default;
};

struct Evaluation {
  Breakdown breakdown;
  double total = 0.0;
  std::vector<std::string> violations;

  bool feasible() const { return violations.empty(); }
};

// Costs `sol` as given: driving legs by D, one p_i per stop, walking tours in
// the listed order, n * f loading. Missing or repeated customers, empty sets
// and capacity breaches are reported as violations.
Evaluation evaluate_solution(const Instance& inst, const Solution& sol);

// Writes the evaluated breakdown and total into `sol`. Throws
// InfeasibleError listing the violations when the solution is infeasible.
void cost_solution(const Instance& inst, Solution& sol);

// {"stops": [..], "served": [[[..]]], "breakdown": {..}, "total": ..}
std::string solution_to_json(const Solution& sol);
Solution solution_from_json(std::string_view text);

// Table of park / drive / walk / load minutes for terminal output.
std::string breakdown_table(const Solution& sol);

}  // namespace parkroute
