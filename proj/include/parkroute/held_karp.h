#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "parkroute/errors.h"

namespace parkroute {

struct ClosedTour {
  double cost = 0.0;
  std::vector<int> order;  // node labels, start excluded
};

inline constexpr int kMaxHeldKarpNodes = 16;

// Exact minimum closed tour start -> all `nodes` -> start under `cost(a, b)`.
// Among optimal tours (within 1e-9 relative) the lexicographically smallest
// label sequence is returned.
template <typename CostFn>
ClosedTour shortest_closed_tour(int start, std::span<const int> nodes,
                                CostFn&& cost) {
  const int m = static_cast<int>(nodes.size());
  if (m == 0) return {};
  if (m > kMaxHeldKarpNodes) {
    throw UnsupportedError("Held-Karp supports at most " +
                           std::to_string(kMaxHeldKarpNodes) + " nodes");
  }
  std::vector<int> label(nodes.begin(), nodes.end());
  std::sort(label.begin(), label.end());

  const std::uint32_t full = (1u << m) - 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // togo[mask * m + j]: cheapest completion from label[j] having visited mask.
  std::vector<double> togo(static_cast<std::size_t>(full + 1) * m, kInf);
  for (int j = 0; j < m; ++j) togo[full * m + j] = cost(label[j], start);
  for (std::uint32_t mask = full; mask-- > 1;) {
    for (int j = 0; j < m; ++j) {
      if (!(mask & (1u << j))) continue;
      double best = kInf;
      for (int k = 0; k < m; ++k) {
        if (mask & (1u << k)) continue;
        best = std::min(best, cost(label[j], label[k]) +
                                  togo[(mask | (1u << k)) * m + k]);
      }
      togo[mask * m + j] = best;
    }
  }

  ClosedTour tour;
  tour.cost = kInf;
  for (int j = 0; j < m; ++j) {
    tour.cost = std::min(tour.cost, cost(start, label[j]) + togo[(1u << j) * m + j]);
  }
  // Forward pass: at each step take the smallest label whose completion is
  // optimal within tolerance.
  std::uint32_t mask = 0;
  int cur = -1;
  std::vector<double> value(m);
  while (mask != full) {
    double best = kInf;
    for (int k = 0; k < m; ++k) {
      value[k] = kInf;
      if (mask & (1u << k)) continue;
      const double step = cur < 0 ? cost(start, label[k]) : cost(label[cur], label[k]);
      value[k] = step + togo[(mask | (1u << k)) * m + k];
      best = std::min(best, value[k]);
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    for (int k = 0; k < m; ++k) {
      if (value[k] <= best + tol) {
        mask |= 1u << k;
        cur = k;
        tour.order.push_back(label[k]);
        break;
      }
    }
  }
  return tour;
}

template <typename CostFn>
double closed_tour_cost(int start, std::span<const int> order, CostFn&& cost) {
  if (order.empty()) return 0.0;
  double total = cost(start, order.front());
  for (std::size_t t = 1; t < order.size(); ++t) total += cost(order[t - 1], order[t]);
  return total + cost(order.back(), start);
}

}  // namespace parkroute
