#include <algorithm>
#include <cmath>
#include <limits>

#include "parkroute/errors.h"
#include "parkroute/heuristic.h"

namespace parkroute {

std::vector<LocationId> ParkingAssignment::customers_of(LocationId spot) const {
  std::vector<LocationId> out;
  for (LocationId k = 1; k < static_cast<LocationId>(assign.size()); ++k) {
    if (assign[k] == spot) out.push_back(k);
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tolerance(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

// Facilities are indexed 0..m-1 in the order of inst.parking.
class Ufl {
 public:
  explicit Ufl(const Instance& inst) : inst_(inst), fac_(inst.parking) {
    m_ = static_cast<int>(fac_.size());
    for (LocationId k = 1; k <= inst.n; ++k) {
      std::vector<int> order(m_);
      for (int f = 0; f < m_; ++f) order[f] = f;
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return cost(a, k) < cost(b, k); });
      by_cost_.push_back(std::move(order));
    }
  }

  int m() const { return m_; }
  int n() const { return inst_.n; }
  double cost(int f, LocationId k) const { return inst_.walk(fac_[f], k); }
  double open_cost(int f) const { return inst_.park_time[fac_[f]]; }
  LocationId id(int f) const { return fac_[f]; }

  // Objective with each customer at its cheapest open facility (lowest index
  // on ties). Unused facilities are removed from `open`.
  double evaluate(std::vector<int>& open) const {
    std::sort(open.begin(), open.end());
    if (open.empty()) return kInf;
    std::vector<char> used(m_, 0);
    double total = 0.0;
    for (LocationId k = 1; k <= inst_.n; ++k) {
      int best = open[0];
      for (int f : open) {
        if (cost(f, k) < cost(best, k)) best = f;
      }
      used[best] = 1;
      total += cost(best, k);
    }
    std::erase_if(open, [&](int f) { return !used[f]; });
    for (int f : open) total += open_cost(f);
    return total;
  }

  // Dual ascent lower bound on the facility-location problem where facility f
  // is unavailable (state 2), free (0) or already paid for (1). Also returns
  // the facilities whose dual slack is exhausted.
  double dual_ascent(const std::vector<char>& state, std::vector<int>& tight) const {
    const int n = inst_.n;
    std::vector<double> slack(m_);
    for (int f = 0; f < m_; ++f) slack[f] = state[f] == 1 ? 0.0 : open_cost(f);
    std::vector<std::vector<int>> levels(n + 1);
    std::vector<double> v(n + 1, 0.0);
    std::vector<std::size_t> pos(n + 1, 0);
    for (LocationId k = 1; k <= n; ++k) {
      for (int f : by_cost_[k - 1]) {
        if (state[f] != 2) levels[k].push_back(f);
      }
      if (levels[k].empty()) return kInf;
      v[k] = cost(levels[k][0], k);
      pos[k] = advance(levels[k], k, v[k], 0);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (LocationId k = 1; k <= n; ++k) {
        const auto& lv = levels[k];
        const double next = pos[k] < lv.size() ? cost(lv[pos[k]], k) : kInf;
        double delta = next - v[k];
        for (std::size_t t = 0; t < pos[k]; ++t) delta = std::min(delta, slack[lv[t]]);
        if (delta <= 0.0) continue;
        if (delta == kInf) return kInf;
        v[k] += delta;
        for (std::size_t t = 0; t < pos[k]; ++t) slack[lv[t]] -= delta;
        if (v[k] >= next) {
          pos[k] = advance(lv, k, v[k], pos[k]);
          changed = true;
        }
      }
    }
    tight.clear();
    for (int f = 0; f < m_; ++f) {
      if (state[f] != 2 && slack[f] <= tolerance(open_cost(f))) tight.push_back(f);
    }
    double total = 0.0;
    for (LocationId k = 1; k <= n; ++k) total += v[k];
    return total;
  }

 private:
  std::size_t advance(const std::vector<int>& lv, LocationId k, double value,
                      std::size_t from) const {
    while (from < lv.size() && cost(lv[from], k) <= value) ++from;
    return from;
  }

  const Instance& inst_;
  std::vector<LocationId> fac_;
  int m_ = 0;
  std::vector<std::vector<int>> by_cost_;
};

struct Best {
  double cost = kInf;
  std::vector<int> open;

  bool offer(double c, const std::vector<int>& o) {
    if (o.empty() || c == kInf) return false;
    const double tol = tolerance(cost);
    const bool take = cost == kInf || c < cost - tol ||
                      (c <= cost + tol && (o.size() < open.size() ||
                                           (o.size() == open.size() && o < open)));
    if (take) {
      cost = c;
      open = o;
    }
    return take;
  }
};

void local_search(const Ufl& ufl, Best& best) {
  std::vector<int> cur = best.open;
  double cur_cost = ufl.evaluate(cur);
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<char> in(ufl.m(), 0);
    for (int f : cur) in[f] = 1;
    auto attempt = [&](std::vector<int> cand) {
      const double c = ufl.evaluate(cand);
      best.offer(c, cand);
      if (c < cur_cost - tolerance(cur_cost)) {
        cur = std::move(cand);
        cur_cost = c;
        improved = true;
      }
    };
    for (int f = 0; f < ufl.m() && !improved; ++f) {
      std::vector<int> cand = cur;
      if (in[f]) {
        if (cur.size() == 1) continue;
        std::erase(cand, f);
      } else {
        cand.push_back(f);
      }
      attempt(std::move(cand));
    }
    for (int out : std::vector<int>(cur)) {
      if (improved) break;
      for (int f = 0; f < ufl.m() && !improved; ++f) {
        if (in[f]) continue;
        std::vector<int> cand = cur;
        std::replace(cand.begin(), cand.end(), out, f);
        attempt(std::move(cand));
      }
    }
  }
  best.offer(cur_cost, cur);
}

class Search {
 public:
  Search(const Ufl& ufl, Best& best, std::int64_t max_nodes)
      : ufl_(ufl), best_(best), max_nodes_(max_nodes), state_(ufl.m(), 0) {}

  bool run() {
    node(0);
    return !aborted_;
  }
  std::int64_t nodes() const { return nodes_; }

 private:
  void node(int t) {
    if (aborted_) return;
    if (++nodes_ > max_nodes_) {
      aborted_ = true;
      return;
    }
    double fixed = 0.0;
    std::vector<int> open;
    for (int f = 0; f < ufl_.m(); ++f) {
      if (state_[f] == 1) {
        fixed += ufl_.open_cost(f);
        open.push_back(f);
      }
    }
    std::vector<int> tight;
    const double bound = fixed + ufl_.dual_ascent(state_, tight);
    if (bound == kInf) return;
    const double tol = tolerance(best_.cost);
    if (bound > best_.cost + tol) return;
    const std::size_t min_open = std::max<std::size_t>(open.size(), 1);
    if (bound >= best_.cost - tol) {
      if (min_open > best_.open.size()) return;
      if (min_open == best_.open.size() && lex_behind(t)) return;
    }

    std::vector<int> primal = open;
    for (int f : tight) {
      if (state_[f] == 0) primal.push_back(f);
    }
    if (!primal.empty()) {
      const double c = ufl_.evaluate(primal);
      best_.offer(c, primal);
    }
    if (t == ufl_.m()) {
      if (!open.empty()) best_.offer(ufl_.evaluate(open), open);
      return;
    }
    state_[t] = 1;
    node(t + 1);
    state_[t] = 2;
    node(t + 1);
    state_[t] = 0;
  }

  // Whether every completion of the decisions on facilities [0, t) lists
  // its spots after the incumbent's, at equal size.
  bool lex_behind(int t) const {
    std::vector<char> in_best(ufl_.m(), 0);
    for (int f : best_.open) in_best[f] = 1;
    for (int f = 0; f < t; ++f) {
      const bool mine = state_[f] == 1;
      if (mine != static_cast<bool>(in_best[f])) return !mine;
    }
    return false;
  }

  const Ufl& ufl_;
  Best& best_;
  std::int64_t max_nodes_;
  std::vector<char> state_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

double par_objective(const Instance& inst, const std::vector<LocationId>& opened) {
  if (opened.empty()) return kInf;
  double total = 0.0;
  for (LocationId f : opened) total += inst.park_time[f];
  for (LocationId k = 1; k <= inst.n; ++k) {
    double best = kInf;
    for (LocationId f : opened) best = std::min(best, inst.walk(f, k));
    total += best;
  }
  return total;
}

ParkingAssignment solve_par(const Instance& inst, const ParOptions& options) {
  if (inst.parking.empty()) {
    throw InfeasibleError("parking assignment needs at least one parking location");
  }
  const Ufl ufl(inst);
  Best best;
  ParkingAssignment result;

  // Start from the spots that are tight in the unrestricted dual.
  std::vector<char> state(ufl.m(), 0);
  std::vector<int> tight;
  ufl.dual_ascent(state, tight);
  std::vector<int> start = tight;
  if (start.empty()) start.push_back(0);
  best.offer(ufl.evaluate(start), start);
  local_search(ufl, best);

  if (inst.n <= options.max_exact_customers) {
    Search search(ufl, best, options.max_nodes);
    result.exact = search.run();
    result.nodes = search.nodes();
  } else {
    result.exact = false;
  }

  std::vector<int> open = best.open;
  result.objective = ufl.evaluate(open);
  for (int f : open) result.opened.push_back(ufl.id(f));
  result.assign.assign(inst.n + 1, kDepot);
  for (LocationId k = 1; k <= inst.n; ++k) {
    int pick = open[0];
    for (int f : open) {
      if (ufl.cost(f, k) < ufl.cost(pick, k)) pick = f;
    }
    result.assign[k] = ufl.id(pick);
  }
  return result;
}

}  // namespace parkroute
