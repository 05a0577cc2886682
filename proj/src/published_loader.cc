#include "parkroute/published.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "parkroute/errors.h"

namespace parkroute {

#if PARKROUTE_PUBLISHED_LOADER

namespace {

std::vector<std::vector<double>> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
    }
    std::istringstream cells(line);
    std::vector<double> row;
    std::string cell;
    while (cells >> cell) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("non-numeric cell '" + cell + "' in " + path.string());
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows,
                 const std::filesystem::path& path) {
  const int size = static_cast<int>(rows.size());
  Matrix m(size);
  for (int r = 0; r < size; ++r) {
    if (static_cast<int>(rows[r].size()) != size) {
      throw DimensionError(path.string() + ": row " + std::to_string(r) +
                           " has " + std::to_string(rows[r].size()) +
                           " cells, expected " + std::to_string(size));
    }
    for (int c = 0; c < size; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace

bool published_loader_enabled() { return true; }

Instance load_published_instance(const std::filesystem::path& dir,
                                 const PublishedOptions& options) {
  if (!std::filesystem::is_directory(dir)) {
    throw ParseError("not an instance directory: " + dir.string());
  }
  Instance inst;
  inst.drive = to_matrix(read_table(dir / "drive.csv"), dir / "drive.csv");
  inst.n = inst.drive.size() - 1;
  if (inst.n < 1) throw DimensionError("drive.csv must cover depot + customers");
  const int size = inst.num_locations();
  Matrix walk = to_matrix(read_table(dir / "walk.csv"), dir / "walk.csv");
  if (walk.size() == size) {
    inst.walk = std::move(walk);
  } else if (walk.size() == inst.n) {
    inst.walk = Matrix(size);
    for (int r = 0; r < inst.n; ++r) {
      for (int c = 0; c < inst.n; ++c) inst.walk(r + 1, c + 1) = walk(r, c);
    }
  } else {
    throw DimensionError("walk.csv must be nxn or (n+1)x(n+1)");
  }

  nlohmann::json meta = nlohmann::json::object();
  if (std::filesystem::exists(dir / "meta.json")) {
    std::ifstream in(dir / "meta.json");
    try {
      meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid meta.json: ") + e.what());
    }
  }
  inst.park_time.assign(size, 0.0);
  if (options.park_time) {
    std::fill(inst.park_time.begin() + 1, inst.park_time.end(), *options.park_time);
  } else if (meta.contains("p")) {
    if (meta["p"].is_array()) {
      if (static_cast<int>(meta["p"].size()) != inst.n) {
        throw DimensionError("meta.json p must have n entries");
      }
      for (int i = 0; i < inst.n; ++i) inst.park_time[i + 1] = meta["p"][i].get<double>();
    } else {
      std::fill(inst.park_time.begin() + 1, inst.park_time.end(),
                meta["p"].get<double>());
    }
  }
  if (options.capacity) {
    inst.capacity_count = options.capacity;
  } else if (meta.contains("q")) {
    inst.capacity_count = meta["q"].get<int>();
  } else {
    inst.capacity_count = 3;
  }
  if (options.load) {
    inst.load_per_package = *options.load;
  } else if (meta.contains("f")) {
    inst.load_per_package = meta["f"].get<double>();
  }
  for (LocationId c = 1; c <= inst.n; ++c) inst.parking.push_back(c);
  inst.name = dir.filename().string();
  validate_instance(inst);
  return inst;
}

#else

bool published_loader_enabled() { return false; }

Instance load_published_instance(const std::filesystem::path&,
                                 const PublishedOptions&) {
  throw UnsupportedError("built without the published-instance loader");
}

#endif

}  // namespace parkroute
