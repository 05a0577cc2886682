#include "parkroute/instance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "parkroute/errors.h"
#include "parkroute/published.h"

namespace parkroute {

using nlohmann::json;

bool Instance::is_parking(LocationId id) const {
  return std::binary_search(parking.begin(), parking.end(), id);
}

namespace {

std::string loc_str(LocationId a) { return std::to_string(a); }

void check_matrix(const Matrix& m, int expected, const char* what) {
  if (m.size() != expected) {
    throw DimensionError(std::string(what) + " matrix must be " +
                         std::to_string(expected) + "x" +
                         std::to_string(expected) + ", got size " +
                         std::to_string(m.size()));
  }
  for (int r = 0; r < m.size(); ++r) {
    for (int c = 0; c < m.size(); ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidValueError(std::string(what) + "(" + loc_str(r) + "," +
                                loc_str(c) + ") must be a finite time >= 0");
      }
    }
    if (m(r, r) != 0.0) {
      throw InvalidValueError(std::string(what) + " diagonal entry " +
                              loc_str(r) + " must be 0");
    }
  }
}

// Counts triangle breaches over locations [first, size).
void scan_triangles(const Matrix& m, int first, char tag,
                    ValidationReport& report, std::int64_t& count,
                    double& worst, std::int64_t& asymmetric) {
  const int size = m.size();
  for (int a = first; a < size; ++a) {
    for (int c = first; c < size; ++c) {
      if (a == c) continue;
      if (a < c && std::abs(m(a, c) - m(c, a)) > kTimeTolerance) ++asymmetric;
      for (int b = first; b < size; ++b) {
        if (b == a || b == c) continue;
        const double excess = m(a, c) - (m(a, b) + m(b, c));
        if (excess > kTimeTolerance) {
          ++count;
          worst = std::max(worst, excess);
          if (report.violations.size() < ValidationReport::kMaxListed) {
            report.violations.push_back({tag, a, b, c, excess});
          }
        }
      }
    }
  }
}

double get_number(const json& j, const char* what) {
  if (!j.is_number()) {
    throw ParseError(std::string("expected a number for ") + what);
  }
  return j.get<double>();
}

Matrix read_matrix(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  const int size = static_cast<int>(j.size());
  Matrix m(size);
  for (int r = 0; r < size; ++r) {
    const json& row = j[r];
    if (!row.is_array()) {
      throw ParseError(std::string(what) + " rows must be arrays");
    }
    if (static_cast<int>(row.size()) != size) {
      throw DimensionError(std::string(what) + " row " + std::to_string(r) +
                           " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(size));
    }
    for (int c = 0; c < size; ++c) m(r, c) = get_number(row[c], what);
  }
  return m;
}

// Per-customer vector (length n) mapped onto location indexing.
std::vector<double> read_customer_vector(const json& j, int n,
                                         const char* what) {
  std::vector<double> out(n + 1, 0.0);
  if (j.is_number()) {
    std::fill(out.begin() + 1, out.end(), j.get<double>());
    return out;
  }
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  if (static_cast<int>(j.size()) != n) {
    throw DimensionError(std::string(what) + " must have " +
                         std::to_string(n) + " entries, got " +
                         std::to_string(j.size()));
  }
  for (int i = 0; i < n; ++i) out[i + 1] = get_number(j[i], what);
  return out;
}

json customer_vector_json(const std::vector<double>& v) {
  json out = json::array();
  for (std::size_t i = 1; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::string matrix_text(const Matrix& m) {
  std::string out = "[\n";
  for (int r = 0; r < m.size(); ++r) {
    json row = json::array();
    for (double v : m.row(r)) row.push_back(v);
    out += "    " + row.dump();
    out += (r + 1 < m.size()) ? ",\n" : "\n";
  }
  out += "  ]";
  return out;
}

}  // namespace

void check_instance_structure(const Instance& inst) {
  if (inst.n < 1) throw InvalidValueError("instance needs at least one customer");
  const int size = inst.num_locations();
  check_matrix(inst.drive, size, "drive");
  check_matrix(inst.walk, size, "walk");
  if (static_cast<int>(inst.park_time.size()) != size) {
    throw DimensionError("park_time must have one entry per customer");
  }
  if (inst.park_time[kDepot] != 0.0) {
    throw InvalidValueError("the depot carries no parking search time");
  }
  for (double p : inst.park_time) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidValueError("parking search times must be >= 0");
    }
  }
  if (!std::isfinite(inst.load_per_package) || inst.load_per_package < 0.0) {
    throw InvalidValueError("load time f must be >= 0");
  }
  if (inst.capacity_count && *inst.capacity_count < 1) {
    throw InvalidValueError("capacity q must be >= 1");
  }
  auto check_caps = [&](const std::optional<double>& cap,
                        const std::vector<double>& per, const char* what) {
    if (!per.empty() && static_cast<int>(per.size()) != size) {
      throw DimensionError(std::string(what) + " must have one entry per customer");
    }
    for (double v : per) {
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidValueError(std::string(what) + " must be >= 0");
      }
    }
    if (cap && !(*cap >= 0.0)) {
      throw InvalidValueError(std::string(what) + " capacity must be >= 0");
    }
  };
  check_caps(inst.capacity_weight, inst.weights, "weights");
  check_caps(inst.capacity_volume, inst.volumes, "volumes");
  if (!std::is_sorted(inst.parking.begin(), inst.parking.end()) ||
      std::adjacent_find(inst.parking.begin(), inst.parking.end()) !=
          inst.parking.end()) {
    throw InvalidValueError("parking locations must be sorted and unique");
  }
  for (LocationId id : inst.parking) {
    if (id < 1 || id > inst.n) {
      throw InvalidValueError("parking location " + loc_str(id) +
                              " is not a customer location");
    }
  }
  if (!inst.coords.empty() && static_cast<int>(inst.coords.size()) != size) {
    throw DimensionError("coords must have one entry per location");
  }
}

ValidationReport validate_instance(const Instance& inst) {
  check_instance_structure(inst);
  for (LocationId c = 1; c <= inst.n; ++c) {
    if (inst.capacity_weight && inst.weight(c) > *inst.capacity_weight) {
      throw InfeasibleError("customer " + loc_str(c) +
                            " package exceeds the weight capacity");
    }
    if (inst.capacity_volume && inst.volume(c) > *inst.capacity_volume) {
      throw InfeasibleError("customer " + loc_str(c) +
                            " package exceeds the volume capacity");
    }
  }
  ValidationReport report;
  scan_triangles(inst.drive, 0, 'D', report, report.drive_violations,
                 report.drive_worst_excess, report.drive_asymmetric_pairs);
  scan_triangles(inst.walk, 1, 'W', report, report.walk_violations,
                 report.walk_worst_excess, report.walk_asymmetric_pairs);
  if (report.drive_violations > 0) {
    report.warnings.push_back(
        "driving times violate the triangle inequality " +
        std::to_string(report.drive_violations) + " times");
  }
  if (report.walk_violations > 0) {
    report.warnings.push_back(
        "walking times violate the triangle inequality " +
        std::to_string(report.walk_violations) + " times");
  }
  if (inst.parking.empty()) {
    report.warnings.push_back("no parking locations: the instance is infeasible");
  }
  return report;
}

namespace {

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ParseError("instance needs an integer field 'n'");
  }
  Instance inst;
  inst.n = doc["n"].get<int>();
  if (inst.n < 1) throw InvalidValueError("n must be >= 1");
  const int size = inst.n + 1;
  for (const char* key : {"drive", "walk", "park_time"}) {
    if (!doc.contains(key)) {
      throw ParseError(std::string("instance is missing '") + key + "'");
    }
  }
  inst.drive = read_matrix(doc["drive"], "drive");
  if (inst.drive.size() != size) {
    throw DimensionError("drive matrix must be (n+1)x(n+1)");
  }
  Matrix walk = read_matrix(doc["walk"], "walk");
  if (walk.size() == size) {
    inst.walk = std::move(walk);
  } else if (walk.size() == inst.n) {
    inst.walk = Matrix(size);
    for (int r = 0; r < inst.n; ++r) {
      for (int c = 0; c < inst.n; ++c) inst.walk(r + 1, c + 1) = walk(r, c);
    }
  } else {
    throw DimensionError("walk matrix must be nxn or (n+1)x(n+1)");
  }
  inst.park_time = read_customer_vector(doc["park_time"], inst.n, "park_time");
  if (doc.contains("q") && !doc["q"].is_null()) {
    if (!doc["q"].is_number_integer()) throw ParseError("q must be an integer");
    inst.capacity_count = doc["q"].get<int>();
  }
  if (doc.contains("f")) inst.load_per_package = get_number(doc["f"], "f");
  if (doc.contains("cap_weight") && !doc["cap_weight"].is_null()) {
    inst.capacity_weight = get_number(doc["cap_weight"], "cap_weight");
  }
  if (doc.contains("weights")) {
    inst.weights = read_customer_vector(doc["weights"], inst.n, "weights");
  }
  if (doc.contains("cap_volume") && !doc["cap_volume"].is_null()) {
    inst.capacity_volume = get_number(doc["cap_volume"], "cap_volume");
  }
  if (doc.contains("volumes")) {
    inst.volumes = read_customer_vector(doc["volumes"], inst.n, "volumes");
  }
  if (doc.contains("parking")) {
    if (!doc["parking"].is_array()) throw ParseError("parking must be an array");
    for (const json& id : doc["parking"]) {
      if (!id.is_number_integer()) throw ParseError("parking ids must be integers");
      inst.parking.push_back(id.get<int>());
    }
    std::sort(inst.parking.begin(), inst.parking.end());
  } else {
    for (LocationId c = 1; c <= inst.n; ++c) inst.parking.push_back(c);
  }
  if (doc.contains("coords")) {
    const json& coords = doc["coords"];
    if (!coords.is_array()) throw ParseError("coords must be an array");
    for (const json& pt : coords) {
      if (!pt.is_array() || pt.size() != 2) {
        throw ParseError("coords entries must be [x, y]");
      }
      inst.coords.push_back({get_number(pt[0], "coords"), get_number(pt[1], "coords")});
    }
  }
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    inst.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("name")) inst.name = doc["name"].get<std::string>();
  validate_instance(inst);
  return inst;
}

}  // namespace

Instance load_instance(std::string_view source, InstanceFormat format) {
  if (format == InstanceFormat::kPublished) {
    return load_published_instance(std::filesystem::path(std::string(source)));
  }
  json doc;
  try {
    doc = json::parse(source.begin(), source.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid instance JSON: ") + e.what());
  }
  try {
    return instance_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid instance field: ") + e.what());
  }
}

Instance load_instance_file(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    return load_published_instance(path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read instance file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return load_instance(text.str());
}

std::string save_instance(const Instance& inst) {
  std::vector<std::pair<std::string, std::string>> fields;
  auto add = [&](std::string key, const json& value) {
    fields.emplace_back(std::move(key), value.dump());
  };
  add("n", inst.n);
  if (!inst.name.empty()) add("name", inst.name);
  if (inst.seed) add("seed", *inst.seed);
  add("q", inst.capacity_count ? json(*inst.capacity_count) : json(nullptr));
  add("f", inst.load_per_package);
  add("park_time", customer_vector_json(inst.park_time));
  if (inst.capacity_weight) add("cap_weight", *inst.capacity_weight);
  if (!inst.weights.empty()) add("weights", customer_vector_json(inst.weights));
  if (inst.capacity_volume) add("cap_volume", *inst.capacity_volume);
  if (!inst.volumes.empty()) add("volumes", customer_vector_json(inst.volumes));
  if (!inst.parks_at_all_customers()) add("parking", inst.parking);
  if (!inst.coords.empty()) {
    json coords = json::array();
    for (const Point& p : inst.coords) coords.push_back({p.x, p.y});
    add("coords", coords);
  }
  fields.emplace_back("drive", matrix_text(inst.drive));
  fields.emplace_back("walk", matrix_text(inst.walk));

  std::string out = "{\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out += "  \"" + fields[i].first + "\": " + fields[i].second;
    out += (i + 1 < fields.size()) ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

void save_instance_file(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << save_instance(inst);
}

Instance gen_geo_instance(const GeoParams& params) {
  if (params.n < 1) throw InvalidValueError("n must be >= 1");
  if (params.drive_rate < 0.0 || params.walk_rate < params.drive_rate) {
    throw InvalidValueError("rates must satisfy 0 <= drive_rate <= walk_rate");
  }
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Instance inst;
  inst.n = params.n;
  const int size = inst.num_locations();
  inst.coords.resize(size);
  for (Point& p : inst.coords) {
    p.x = unit(rng);
    p.y = unit(rng);
  }
  inst.drive = Matrix(size);
  inst.walk = Matrix(size);
  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size; ++b) {
      if (a == b) continue;
      const double dist = std::hypot(inst.coords[a].x - inst.coords[b].x,
                                     inst.coords[a].y - inst.coords[b].y);
      inst.drive(a, b) = dist * params.drive_rate;
      inst.walk(a, b) = dist * params.walk_rate;
    }
  }
  inst.park_time.assign(size, params.park_time);
  inst.park_time[kDepot] = 0.0;
  inst.capacity_count = params.capacity;
  inst.load_per_package = params.load;
  for (LocationId c = 1; c <= inst.n; ++c) inst.parking.push_back(c);
  inst.seed = params.seed;
  inst.name = "geo-n" + std::to_string(params.n) + "-s" + std::to_string(params.seed);
  check_instance_structure(inst);
  return inst;
}

}  // namespace parkroute
