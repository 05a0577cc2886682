#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "parkroute/instance.h"
#include "parkroute/service_sets.h"
#include "parkroute/solution.h"

namespace parkroute {

// Opened parking spots and the spot each customer walks from.
struct ParkingAssignment {
  std::vector<LocationId> opened;        // sorted
  std::vector<LocationId> assign;        // indexed by customer; assign[0] unused
  double objective = 0.0;                // sum p_i over opened + sum W(spot(k), k)
  bool exact = true;                     // false when the search was cut short or skipped
  std::int64_t nodes = 0;

  std::vector<LocationId> customers_of(LocationId spot) const;
};

inline constexpr int kMaxExactParkingCustomers = 60;

struct ParOptions {
  int max_exact_customers = kMaxExactParkingCustomers;
  std::int64_t max_nodes = 2'000'000;
};

// Facility-location choice of parking spots: open cost p_i, assignment cost
// the one-way walk W(i, k). Branch and bound with a dual-ascent bound up to
// max_exact_customers, local search beyond. Ties prefer fewer spots, then
// the lexicographically smallest spot list.
ParkingAssignment solve_par(const Instance& inst, const ParOptions& options = {});

// Objective of opening exactly `opened`, each customer taking its nearest
// (then lowest id) spot.
double par_objective(const Instance& inst, const std::vector<LocationId>& opened);

struct ParkingRoute {
  std::vector<LocationId> order;  // stops, depot excluded
  double drive = 0.0;             // sum of D along depot -> order -> depot
  bool exact = true;
};

inline constexpr int kMaxExactRouteStops = 13;

// Driving tour over the depot and `spots`: Held-Karp up to
// kMaxExactRouteStops stops, otherwise nearest neighbour followed by 2-opt
// and Or-opt.
ParkingRoute route_parking(const Instance& inst, const std::vector<LocationId>& spots);
ParkingRoute route_parking_local_search(const Instance& inst,
                                        const std::vector<LocationId>& spots);

struct SsaResult {
  std::vector<std::vector<LocationId>> sets;  // walking orders
  double walk = 0.0;
  bool exact = true;
};

inline constexpr int kMaxExactSsaCustomers = 20;

// Cheapest partition of `customers` into sets admissible at `spot`. Throws
// ResourceError above kMaxExactSsaCustomers.
SsaResult solve_ssa(const ServiceSetCatalog& cat, LocationId spot,
                    const std::vector<LocationId>& customers);

// Capacity-respecting split of `customers` into consecutive groups along a
// nearest-neighbour walk from `spot`. Used when solve_ssa declines.
SsaResult greedy_ssa(const ServiceSetCatalog& cat, LocationId spot,
                     const std::vector<LocationId>& customers);

struct HeuristicResult {
  Solution solution;
  ParkingAssignment assignment;
  double route_drive = 0.0;
  bool routing_exact = true;
  bool ssa_exact = true;
  double seconds = 0.0;
};

// Parking assignment, then the driving route over the opened spots, then an
// exact walking partition at each spot.
HeuristicResult heuristic_solve(const Instance& inst, const ServiceSetCatalog& cat,
                                const ParOptions& options = {});
HeuristicResult heuristic_solve(const Instance& inst);

}  // namespace parkroute
