#include "parkroute/solution.h"

#include <cstdio>
#include <sstream>

#include "parkroute/errors.h"
#include "parkroute/service_sets.h"
#include "solution_json.h"

namespace parkroute {

int Solution::set_count() const {
  int count = 0;
  for (const Stop& s : stops) count += static_cast<int>(s.sets.size());
  return count;
}

Evaluation evaluate_solution(const Instance& inst, const Solution& sol) {
  Evaluation ev;
  auto flag = [&](std::string msg) { ev.violations.push_back(std::move(msg)); };
  std::vector<int> seen(inst.num_locations(), 0);

  LocationId prev = kDepot;
  for (std::size_t s = 0; s < sol.stops.size(); ++s) {
    const Stop& stop = sol.stops[s];
    const LocationId at = stop.location;
    if (at < 1 || at > inst.n) {
      flag("stop " + std::to_string(s) + " is at invalid location " + std::to_string(at));
      continue;
    }
    ev.breakdown.drive += inst.drive(prev, at);
    ev.breakdown.park += inst.park_time[at];
    prev = at;
    for (const auto& set : stop.sets) {
      if (set.empty()) {
        flag("stop " + std::to_string(at) + " has an empty service set");
        continue;
      }
      bool valid = true;
      double weight = 0.0;
      double volume = 0.0;
      for (LocationId c : set) {
        if (c < 1 || c > inst.n) {
          flag("unknown customer " + std::to_string(c));
          valid = false;
          continue;
        }
        if (++seen[c] == 2) flag("customer " + std::to_string(c) + " is served more than once");
        weight += inst.weight(c);
        volume += inst.volume(c);
      }
      if (inst.capacity_count && static_cast<int>(set.size()) > *inst.capacity_count) {
        flag("a set at stop " + std::to_string(at) + " holds " + std::to_string(set.size()) +
             " packages, above q = " + std::to_string(*inst.capacity_count));
      }
      if (inst.capacity_weight && weight > *inst.capacity_weight + kTimeTolerance) {
        flag("a set at stop " + std::to_string(at) + " exceeds the weight capacity");
      }
      if (inst.capacity_volume && volume > *inst.capacity_volume + kTimeTolerance) {
        flag("a set at stop " + std::to_string(at) + " exceeds the volume capacity");
      }
      if (valid) ev.breakdown.walk += walk_time_in_order(inst, at, set);
    }
  }
  ev.breakdown.drive += inst.drive(prev, kDepot);
  for (LocationId c = 1; c <= inst.n; ++c) {
    if (seen[c] == 0) flag("customer " + std::to_string(c) + " is not served");
  }
  ev.breakdown.load = inst.total_load();
  ev.total = ev.breakdown.total();
  return ev;
}

void cost_solution(const Instance& inst, Solution& sol) {
  Evaluation ev = evaluate_solution(inst, sol);
  if (!ev.feasible()) {
    std::string msg = "infeasible solution:";
    for (const auto& v : ev.violations) msg += "\n  " + v;
    throw InfeasibleError(msg);
  }
  sol.breakdown = ev.breakdown;
  sol.total = ev.total;
}

namespace detail {

nlohmann::ordered_json solution_json(const Solution& sol) {
  nlohmann::ordered_json doc;
  doc["stops"] = nlohmann::ordered_json::array();
  doc["served"] = nlohmann::ordered_json::array();
  for (const Stop& s : sol.stops) {
    doc["stops"].push_back(s.location);
    doc["served"].push_back(s.sets);
  }
  doc["breakdown"] = {{"park", sol.breakdown.park},
                      {"drive", sol.breakdown.drive},
                      {"walk", sol.breakdown.walk},
                      {"load", sol.breakdown.load}};
  doc["total"] = sol.total;
  return doc;
}

Solution solution_from(const nlohmann::json& doc) {
  Solution sol;
  try {
    const auto& stops = doc.at("stops");
    const auto& served = doc.at("served");
    if (stops.size() != served.size()) {
      throw DimensionError("solution lists " + std::to_string(stops.size()) + " stops but " +
                           std::to_string(served.size()) + " served entries");
    }
    for (std::size_t s = 0; s < stops.size(); ++s) {
      Stop stop;
      stop.location = stops[s].get<LocationId>();
      stop.sets = served[s].get<std::vector<std::vector<LocationId>>>();
      sol.stops.push_back(std::move(stop));
    }
    if (doc.contains("breakdown")) {
      const auto& b = doc.at("breakdown");
      sol.breakdown = {b.at("park").get<double>(), b.at("drive").get<double>(),
                       b.at("walk").get<double>(), b.at("load").get<double>()};
    }
    if (doc.contains("total")) sol.total = doc.at("total").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution document: ") + e.what());
  }
  return sol;
}

}  // namespace detail

std::string solution_to_json(const Solution& sol) {
  return detail::solution_json(sol).dump(2) + "\n";
}

Solution solution_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution document: ") + e.what());
  }
  return detail::solution_from(doc);
}

std::string breakdown_table(const Solution& sol) {
  char line[96];
  std::ostringstream out;
  auto row = [&](const char* name, double minutes) {
    const double share = sol.total > 0 ? 100.0 * minutes / sol.total : 0.0;
    std::snprintf(line, sizeof line, "%-8s %14.6f %8.2f%%\n", name, minutes, share);
    out << line;
  };
  std::snprintf(line, sizeof line, "%-8s %14s %9s\n", "activity", "minutes", "share");
  out << line;
  row("park", sol.breakdown.park);
  row("drive", sol.breakdown.drive);
  row("walk", sol.breakdown.walk);
  row("load", sol.breakdown.load);
  std::snprintf(line, sizeof line, "%-8s %14.6f\n", "total", sol.total);
  out << line;
  std::snprintf(line, sizeof line, "stops %d, service sets %d\n", sol.stop_count(),
                sol.set_count());
  out << line;
  return out.str();
}

}  // namespace parkroute
