#include "parkroute/service_sets.h"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "parkroute/errors.h"
#include "parkroute/held_karp.h"

namespace parkroute {

struct ServiceSetCatalog::WalkMemo {
  std::mutex mu;
  std::unordered_map<std::uint64_t, double> cost;
};

bool ServiceSet::contains(LocationId c) const {
  return std::binary_search(members.begin(), members.end(), c);
}

WalkTour walk_tour(const Instance& inst, LocationId parking,
                   std::span<const LocationId> members) {
  if (members.empty()) return {};
  if (static_cast<int>(members.size()) > kMaxExactWalkSetSize) {
    throw UnsupportedError("walking tours are exact only up to " +
                           std::to_string(kMaxExactWalkSetSize) + " customers");
  }
  if (parking < 1 || parking > inst.n) {
    throw InvalidValueError("walking tours start at a non-depot location");
  }
  const ClosedTour tour = shortest_closed_tour(
      parking, members, [&](int a, int b) { return inst.walk(a, b); });
  return {tour.cost, tour.order};
}

double walk_time(const Instance& inst, LocationId parking,
                 std::span<const LocationId> members) {
  return walk_tour(inst, parking, members).minutes;
}

double walk_time_in_order(const Instance& inst, LocationId parking,
                          std::span<const LocationId> order) {
  return closed_tour_cost(parking, order,
                          [&](int a, int b) { return inst.walk(a, b); });
}

std::optional<int> ServiceSetCatalog::find(std::span<const LocationId> members) const {
  const auto it = index_.find(std::vector<LocationId>(members.begin(), members.end()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ServiceSetCatalog::fits_capacity(std::span<const LocationId> members) const {
  const Instance& inst = *instance_;
  if (members.empty()) return false;
  if (inst.capacity_count && static_cast<int>(members.size()) > *inst.capacity_count) {
    return false;
  }
  double weight = 0.0;
  double volume = 0.0;
  for (LocationId c : members) {
    if (c < 1 || c > inst.n) return false;
    weight += inst.weight(c);
    volume += inst.volume(c);
  }
  if (inst.capacity_weight && weight > *inst.capacity_weight + kTimeTolerance) return false;
  if (inst.capacity_volume && volume > *inst.capacity_volume + kTimeTolerance) return false;
  return true;
}

bool ServiceSetCatalog::reduction_blocks(LocationId parking,
                                         std::span<const LocationId> members) const {
  return reduced_ && members.size() >= 2 &&
         std::binary_search(members.begin(), members.end(), parking);
}

bool ServiceSetCatalog::pair_admissible(LocationId parking, int set_index) const {
  if (!instance_->is_parking(parking)) return false;
  return !reduction_blocks(parking, sets_[set_index].members);
}

bool ServiceSetCatalog::admissible(LocationId parking,
                                   std::span<const LocationId> members) const {
  if (!instance_->is_parking(parking)) return false;
  if (!std::is_sorted(members.begin(), members.end()) ||
      std::adjacent_find(members.begin(), members.end()) != members.end()) {
    return false;
  }
  if (!fits_capacity(members)) return false;
  return !reduction_blocks(parking, members);
}

double ServiceSetCatalog::walk_cost(LocationId parking, int set_index) const {
  const std::uint64_t key =
      static_cast<std::uint64_t>(parking) * sets_.size() + static_cast<std::uint64_t>(set_index);
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    if (auto it = memo_->cost.find(key); it != memo_->cost.end()) return it->second;
  }
  const double value = walk_time(*instance_, parking, sets_[set_index].members);
  std::lock_guard<std::mutex> lock(memo_->mu);
  memo_->cost.emplace(key, value);
  return value;
}

WalkTour ServiceSetCatalog::walk_tour(LocationId parking, int set_index) const {
  return parkroute::walk_tour(*instance_, parking, sets_[set_index].members);
}

std::int64_t ServiceSetCatalog::pair_count() const {
  return reduction_stats().remaining_pairs();
}

ReductionStats ServiceSetCatalog::reduction_stats() const {
  if (!materialized_) {
    throw UnsupportedError("pair counts need a materialized catalog");
  }
  ReductionStats stats;
  stats.full_pairs = static_cast<std::int64_t>(instance_->parking.size()) * set_count();
  if (reduced_) {
    for (LocationId i : instance_->parking) {
      for (int j : membership_[i]) {
        if (sets_[j].size() >= 2) ++stats.removed_pairs;
      }
    }
  }
  return stats;
}

ServiceSetCatalog ServiceSetCatalog::rules_only(const Instance& inst, bool reduced) {
  ServiceSetCatalog cat;
  cat.instance_ = std::make_shared<const Instance>(inst);
  cat.reduced_ = reduced;
  cat.membership_.assign(inst.num_locations(), {});
  cat.memo_ = std::make_shared<WalkMemo>();
  return cat;
}

namespace {

void enumerate_combinations(const Instance& inst, int size, int start,
                            std::vector<LocationId>& current, double weight,
                            double volume, std::vector<ServiceSet>& out,
                            std::int64_t set_limit) {
  if (static_cast<int>(current.size()) == size) {
    ServiceSet s;
    s.members = current;
    s.total_weight = weight;
    s.total_volume = volume;
    if (inst.n <= 64) {
      for (LocationId c : current) s.mask |= std::uint64_t{1} << (c - 1);
    }
    out.push_back(std::move(s));
    if (static_cast<std::int64_t>(out.size()) > set_limit) {
      throw ResourceError("service-set catalog exceeds the pair limit; use heuristic mode");
    }
    return;
  }
  const int needed = size - static_cast<int>(current.size());
  for (LocationId c = start; c <= inst.n - needed + 1; ++c) {
    const double w = weight + inst.weight(c);
    const double v = volume + inst.volume(c);
    if (inst.capacity_weight && w > *inst.capacity_weight + kTimeTolerance) continue;
    if (inst.capacity_volume && v > *inst.capacity_volume + kTimeTolerance) continue;
    current.push_back(c);
    enumerate_combinations(inst, size, c + 1, current, w, v, out, set_limit);
    current.pop_back();
  }
}

}  // namespace

ServiceSetCatalog enumerate_catalog(const Instance& inst, const CatalogOptions& options) {
  if (!inst.capacity_count && !inst.capacity_weight && !inst.capacity_volume) {
    throw InvalidValueError("a catalog needs a count, weight or volume capacity");
  }
  ServiceSetCatalog cat = ServiceSetCatalog::rules_only(inst, false);
  cat.materialized_ = true;
  const int max_size = inst.capacity_count ? std::min(*inst.capacity_count, inst.n) : inst.n;
  const std::int64_t parking_count =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(inst.parking.size()));
  const std::int64_t set_limit = options.max_pairs / parking_count;
  if (!inst.capacity_weight && !inst.capacity_volume) {
    const std::uint64_t sets = count_service_sets(inst.n, max_size);
    if (sets > static_cast<std::uint64_t>(set_limit)) {
      throw ResourceError("catalog would hold " + std::to_string(sets * parking_count) +
                          " (parking, set) pairs, above the limit of " +
                          std::to_string(options.max_pairs) + "; use heuristic mode");
    }
  }
  std::vector<LocationId> current;
  for (int size = 1; size <= max_size; ++size) {
    enumerate_combinations(inst, size, 1, current, 0.0, 0.0, cat.sets_, set_limit);
  }
  for (int j = 0; j < static_cast<int>(cat.sets_.size()); ++j) {
    for (LocationId c : cat.sets_[j].members) cat.membership_[c].push_back(j);
    cat.index_.emplace(cat.sets_[j].members, j);
  }
  if (options.precompute_walk_costs) {
    for (LocationId i : inst.parking) {
      for (int j = 0; j < cat.set_count(); ++j) cat.walk_cost(i, j);
    }
  }
  return cat;
}

ServiceSetCatalog reduce_catalog(const ServiceSetCatalog& catalog) {
  ServiceSetCatalog reduced = catalog;
  reduced.reduced_ = true;
  return reduced;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::uint64_t count_service_sets(int n, int q) {
  std::uint64_t total = 0;
  for (int s = 1; s <= std::min(q, n); ++s) total += binomial(n, s);
  return total;
}

std::uint64_t count_pairs(int n, int q) {
  return static_cast<std::uint64_t>(n) * count_service_sets(n, q);
}

std::uint64_t count_removed_pairs(int n, int q) {
  std::uint64_t per_customer = 0;
  for (int s = 2; s <= std::min(q, n); ++s) per_customer += binomial(n - 1, s - 1);
  return static_cast<std::uint64_t>(n) * per_customer;
}

std::string catalog_csv(const ServiceSetCatalog& catalog,
                        std::optional<LocationId> parking) {
  std::ostringstream out;
  out << "set_id,members,size";
  if (parking) out << ",walk_cost";
  out << "\n";
  char buf[64];
  for (int j = 0; j < catalog.set_count(); ++j) {
    const ServiceSet& s = catalog.set(j);
    out << j << ",";
    for (std::size_t t = 0; t < s.members.size(); ++t) {
      out << (t ? " " : "") << s.members[t];
    }
    out << "," << s.size();
    if (parking) {
      if (catalog.pair_admissible(*parking, j)) {
        std::snprintf(buf, sizeof buf, "%.6f", catalog.walk_cost(*parking, j));
        out << "," << buf;
      } else {
        out << ",";
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace parkroute
