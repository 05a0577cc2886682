#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parkroute/instance.h"

namespace parkroute {

// A group of customers served on one walking tour. `mask` has bit (c - 1)
// set for each member when n <= 64, and is 0 otherwise.
struct ServiceSet {
  std::vector<LocationId> members;  // sorted, unique
  double total_weight = 0.0;
  double total_volume = 0.0;
  std::uint64_t mask = 0;

  int size() const { return static_cast<int>(members.size()); }
  bool contains(LocationId c) const;
};

struct WalkTour {
  double minutes = 0.0;
  std::vector<LocationId> order;
};

inline constexpr int kMaxExactWalkSetSize = 12;

// Shortest walk leaving `parking`, visiting every member and returning.
// Ties resolve to the lexicographically smallest visiting order.
WalkTour walk_tour(const Instance& inst, LocationId parking,
                   std::span<const LocationId> members);
double walk_time(const Instance& inst, LocationId parking,
                 std::span<const LocationId> members);

// Walking minutes of a tour that follows `order` exactly.
double walk_time_in_order(const Instance& inst, LocationId parking,
                          std::span<const LocationId> order);

struct CatalogOptions {
  std::int64_t max_pairs = 20'000'000;
  bool precompute_walk_costs = false;
};

struct ReductionStats {
  std::int64_t full_pairs = 0;
  std::int64_t removed_pairs = 0;

  std::int64_t remaining_pairs() const { return full_pairs - removed_pairs; }
  double percent_removed() const {
    return full_pairs == 0 ? 0.0 : 100.0 * removed_pairs / full_pairs;
  }
};

// The feasible service sets S of an instance, with the parking/set pair
// rules and memoized walking costs w(i, sigma).
class ServiceSetCatalog {
 public:
  // A catalog that answers admissibility and cost queries without listing
  // the sets; used where S is far too large to enumerate.
  static ServiceSetCatalog rules_only(const Instance& inst, bool reduced = false);

  const Instance& instance() const { return *instance_; }
  bool materialized() const { return materialized_; }
  bool reduced() const { return reduced_; }

  std::span<const ServiceSet> sets() const { return sets_; }
  const ServiceSet& set(int index) const { return sets_[index]; }
  // J_i: indices of the sets that contain customer c.
  std::span<const int> sets_containing(LocationId c) const { return membership_[c]; }
  std::optional<int> find(std::span<const LocationId> members) const;

  // Capacity rules only (count, weight, volume).
  bool fits_capacity(std::span<const LocationId> members) const;
  // Parking rules: `parking` is a parking location and, when reduced, a
  // customer never serves a multi-customer set from its own location.
  bool pair_admissible(LocationId parking, int set_index) const;
  bool admissible(LocationId parking, std::span<const LocationId> members) const;

  double walk_cost(LocationId parking, int set_index) const;
  WalkTour walk_tour(LocationId parking, int set_index) const;

  std::int64_t set_count() const { return static_cast<std::int64_t>(sets_.size()); }
  std::int64_t pair_count() const;
  ReductionStats reduction_stats() const;

 private:
  friend ServiceSetCatalog enumerate_catalog(const Instance&, const CatalogOptions&);
  friend ServiceSetCatalog reduce_catalog(const ServiceSetCatalog&);

  struct WalkMemo;

  ServiceSetCatalog() = default;
  bool reduction_blocks(LocationId parking, std::span<const LocationId> members) const;

  std::shared_ptr<const Instance> instance_;
  bool materialized_ = false;
  bool reduced_ = false;
  std::vector<ServiceSet> sets_;
  std::vector<std::vector<int>> membership_;
  std::map<std::vector<LocationId>, int> index_;
  std::shared_ptr<WalkMemo> memo_;
};

// All subsets of C that satisfy every active capacity, ordered by
// (size, members). Throws ResourceError when |Pi \ {0}| * |S| would exceed
// options.max_pairs and InvalidValueError when no capacity is set.
ServiceSetCatalog enumerate_catalog(const Instance& inst,
                                    const CatalogOptions& options = {});

// Drops the pairs (i, sigma) with i in sigma and |sigma| >= 2.
ServiceSetCatalog reduce_catalog(const ServiceSetCatalog& catalog);

// Closed forms for count-capacity catalogs with parking at every customer.
std::uint64_t binomial(int n, int k);
std::uint64_t count_service_sets(int n, int q);
std::uint64_t count_pairs(int n, int q);
std::uint64_t count_removed_pairs(int n, int q);

// CSV: set_id,members,size[,walk_cost]. Members are space separated.
std::string catalog_csv(const ServiceSetCatalog& catalog,
                        std::optional<LocationId> parking = std::nullopt);

}  // namespace parkroute
