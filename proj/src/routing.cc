#include <algorithm>
#include <limits>

#include "parkroute/errors.h"
#include "parkroute/held_karp.h"
#include "parkroute/heuristic.h"

namespace parkroute {

namespace {

double route_drive(const Instance& inst, const std::vector<LocationId>& order) {
  return closed_tour_cost(kDepot, order, [&](int a, int b) { return inst.drive(a, b); });
}

bool improve_two_opt(const Instance& inst, std::vector<LocationId>& order, double& cost) {
  const int size = static_cast<int>(order.size());
  for (int a = 0; a + 1 < size; ++a) {
    for (int b = a + 1; b < size; ++b) {
      std::reverse(order.begin() + a, order.begin() + b + 1);
      const double c = route_drive(inst, order);
      if (c < cost - 1e-9) {
        cost = c;
        return true;
      }
      std::reverse(order.begin() + a, order.begin() + b + 1);
    }
  }
  return false;
}

bool improve_or_opt(const Instance& inst, std::vector<LocationId>& order, double& cost) {
  const int size = static_cast<int>(order.size());
  for (int len = 1; len <= 3; ++len) {
    for (int from = 0; from + len <= size; ++from) {
      std::vector<LocationId> rest;
      rest.insert(rest.end(), order.begin(), order.begin() + from);
      rest.insert(rest.end(), order.begin() + from + len, order.end());
      for (int to = 0; to <= static_cast<int>(rest.size()); ++to) {
        if (to == from) continue;
        std::vector<LocationId> cand = rest;
        cand.insert(cand.begin() + to, order.begin() + from, order.begin() + from + len);
        const double c = route_drive(inst, cand);
        if (c < cost - 1e-9) {
          order = std::move(cand);
          cost = c;
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

ParkingRoute route_parking_local_search(const Instance& inst,
                                        const std::vector<LocationId>& spots) {
  ParkingRoute route;
  route.exact = false;
  std::vector<LocationId> left(spots.begin(), spots.end());
  std::sort(left.begin(), left.end());
  LocationId cur = kDepot;
  while (!left.empty()) {
    auto next = left.begin();
    for (auto it = left.begin(); it != left.end(); ++it) {
      if (inst.drive(cur, *it) < inst.drive(cur, *next)) next = it;
    }
    cur = *next;
    route.order.push_back(cur);
    left.erase(next);
  }
  double cost = route_drive(inst, route.order);
  while (improve_two_opt(inst, route.order, cost) || improve_or_opt(inst, route.order, cost)) {
  }
  route.drive = cost;
  return route;
}

ParkingRoute route_parking(const Instance& inst, const std::vector<LocationId>& spots) {
  if (spots.empty()) throw InvalidValueError("a parking route needs at least one spot");
  if (static_cast<int>(spots.size()) > kMaxExactRouteStops) {
    return route_parking_local_search(inst, spots);
  }
  const ClosedTour tour = shortest_closed_tour(
      kDepot, spots, [&](int a, int b) { return inst.drive(a, b); });
  return {tour.order, route_drive(inst, tour.order), true};
}

}  // namespace parkroute
