#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parkroute/matrix.h"

namespace parkroute {

// Location 0 is the depot; customers are 1..n.
using LocationId = int;
inline constexpr LocationId kDepot = 0;

// Absolute tolerance used for every time comparison.
inline constexpr double kTimeTolerance = 1e-6;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

// Problem data for one delivery tour. Matrices are indexed by location id and
// have size n + 1; the depot row of `walk` is never used.
struct Instance {
  int n = 0;
  Matrix drive;
  Matrix walk;
  std::vector<double> park_time;  // indexed by location; park_time[0] == 0
  std::optional<int> capacity_count;
  std::optional<double> capacity_weight;
  std::vector<double> weights;  // empty, or indexed by location
  std::optional<double> capacity_volume;
  std::vector<double> volumes;  // empty, or indexed by location
  double load_per_package = 0.0;
  std::vector<LocationId> parking;  // sorted subset of 1..n
  std::vector<Point> coords;        // empty, or indexed by location
  std::optional<std::uint64_t> seed;
  std::string name;

  int num_locations() const { return n + 1; }

  // Time to drive from `from` to `to` and find parking there. Returning to the
  // depot needs no search.
  double drive_and_park(LocationId from, LocationId to) const {
    return drive(from, to) + (to == kDepot ? 0.0 : park_time[to]);
  }

  bool is_parking(LocationId id) const;
  bool parks_at_all_customers() const {
    return static_cast<int>(parking.size()) == n;
  }
  double total_load() const { return n * load_per_package; }
  double weight(LocationId c) const { return weights.empty() ? 0.0 : weights[c]; }
  double volume(LocationId c) const { return volumes.empty() ? 0.0 : volumes[c]; }

  bool operator==(const Instance&) const = default;
};

struct TriangleViolation {
  char matrix = 'D';  // 'D' drive, 'W' walk
  LocationId from = 0;
  LocationId via = 0;
  LocationId to = 0;
  double excess = 0.0;  // M(from,to) - M(from,via) - M(via,to)
};

struct ValidationReport {
  std::int64_t drive_violations = 0;
  double drive_worst_excess = 0.0;
  std::int64_t walk_violations = 0;
  double walk_worst_excess = 0.0;
  std::int64_t drive_asymmetric_pairs = 0;
  std::int64_t walk_asymmetric_pairs = 0;
  std::vector<TriangleViolation> violations;  // capped at kMaxListed
  std::vector<std::string> warnings;

  static constexpr std::size_t kMaxListed = 1000;

  bool metric() const { return drive_violations == 0 && walk_violations == 0; }
};

// Structural checks (sizes, signs, diagonals, parking subset). Throws
// DimensionError / InvalidValueError.
void check_instance_structure(const Instance& inst);

// Full validation. Triangle-inequality breaches and asymmetry are reported,
// never rejected. A package that alone exceeds the weight or volume capacity
// throws InfeasibleError.
ValidationReport validate_instance(const Instance& inst);

enum class InstanceFormat { kJson, kPublished };

// Parses a JSON instance document; `format` kPublished treats `source` as a
// directory path (see published_loader).
Instance load_instance(std::string_view source,
                       InstanceFormat format = InstanceFormat::kJson);
Instance load_instance_file(const std::filesystem::path& path);

std::string save_instance(const Instance& inst);
void save_instance_file(const Instance& inst, const std::filesystem::path& path);

struct GeoParams {
  int n = 8;
  std::uint64_t seed = 1;
  double drive_rate = 12.5;  // minutes per distance unit
  double walk_rate = 20.0;   // minutes per distance unit, >= drive_rate
  double park_time = 5.0;
  std::optional<int> capacity = 3;
  double load = 0.0;
};

// Depot and customers uniform in the unit square; Euclidean times.
Instance gen_geo_instance(const GeoParams& params);

}  // namespace parkroute
