#include "parkroute/exact.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "parkroute/errors.h"

namespace parkroute {

int exit_code(SolveStatus status) { return static_cast<int>(status); }

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Mask = std::uint32_t;
using Clock = std::chrono::steady_clock;

double tie_tolerance(double value) { return 1e-9 * std::max(1.0, std::abs(value)); }

// A stop in search form: index into the location table and the customers
// served there.
using StopKey = std::pair<int, Mask>;

struct Incumbent {
  double cost = kInf;
  std::vector<StopKey> seq;
  bool valid = false;
};

bool better_than(double cost, const std::vector<StopKey>& seq, const Incumbent& inc) {
  if (!inc.valid) return true;
  const double tol = tie_tolerance(inc.cost);
  if (cost < inc.cost - tol) return true;
  if (cost > inc.cost + tol) return false;
  if (seq.size() != inc.seq.size()) return seq.size() < inc.seq.size();
  return seq < inc.seq;
}

class Problem {
 public:
  Problem(const Instance& inst, const ServiceSetCatalog& cat, const ExactOptions& opt)
      : inst_(inst), cat_(cat), opt_(opt) {
    n_ = inst.n;
    full_ = n_ == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n_) - 1);
    loc_.push_back(kDepot);
    loc_.insert(loc_.end(), inst.parking.begin(), inst.parking.end());
    m_ = static_cast<int>(loc_.size()) - 1;
    self_single_ = opt.claim4 || opt.corollary1;
    self_member_ = opt.claim3;
    empty_stops_ = !(opt.claim3 || opt.claim4 || opt.corollary1 || opt.claim5);
    build_edges();
    build_bundles();
    build_relaxation();
  }

  int m() const { return m_; }
  Mask full() const { return full_; }
  bool empty_stops() const { return empty_stops_; }
  int location(int li) const { return loc_[li]; }
  double edge(int a, int b) const { return edge_[a * (m_ + 1) + b]; }
  double bundle(int li, Mask k) const { return bundle_[index(li, k)]; }
  double relax(Mask s, int cur) const { return v_[static_cast<std::size_t>(s) * (m_ + 1) + cur]; }
  double root_bound() const { return relax(0, 0); }

  // Number of service sets in the partition behind bundle(li, k).
  int set_count(int li, Mask k) const {
    int count = 0;
    if (self_single_ && k) {
      k &= ~bit(loc_[li]);
      ++count;
    }
    while (k) {
      k ^= cat_.set(choice_[index(li, k)]).mask;
      ++count;
    }
    return count;
  }

  Stop make_stop(int li, Mask k) const {
    Stop stop;
    stop.location = loc_[li];
    if (self_single_ && k) {
      stop.sets.push_back({loc_[li]});
      k &= ~bit(loc_[li]);
    }
    while (k) {
      const int j = choice_[index(li, k)];
      stop.sets.push_back(cat_.walk_tour(loc_[li], j).order);
      k ^= cat_.set(j).mask;
    }
    return stop;
  }

 private:
  static Mask bit(int customer) { return Mask{1} << (customer - 1); }
  std::size_t index(int li, Mask k) const {
    return (static_cast<std::size_t>(li) - 1) * (static_cast<std::size_t>(full_) + 1) + k;
  }

  bool admissible(int l, int j) const {
    if (!cat_.pair_admissible(l, j)) return false;
    const ServiceSet& s = cat_.set(j);
    return !(opt_.var_reduction && s.size() >= 2 && s.contains(l));
  }

  void build_edges() {
    const int size = m_ + 1;
    edge_.assign(static_cast<std::size_t>(size) * size, kInf);
    for (int a = 0; a < size; ++a) {
      for (int b = 0; b < size; ++b) {
        if (a == b) continue;
        const double drive = opt_.weights.drive * inst_.drive(loc_[a], loc_[b]);
        edge_[a * size + b] = b == 0 ? drive : drive + opt_.weights.park * inst_.park_time[loc_[b]];
      }
    }
    // Cheapest way between two stops, passing through parking locations
    // where nothing is served when that is allowed.
    sp_ = edge_;
    if (empty_stops_) {
      for (int a = 0; a < size; ++a) sp_[a * size + a] = 0.0;
      for (int k = 1; k < size; ++k) {
        for (int a = 0; a < size; ++a) {
          for (int b = 0; b < size; ++b) {
            const double via = sp_[a * size + k] + sp_[k * size + b];
            if (via < sp_[a * size + b]) sp_[a * size + b] = via;
          }
        }
      }
    }
  }

  void build_bundles() {
    const std::size_t states = static_cast<std::size_t>(full_) + 1;
    part_.assign(m_ * states, kInf);
    choice_.assign(m_ * states, -1);
    bundle_.assign(m_ * states, kInf);
    std::vector<double> cost(cat_.set_count());
    for (int li = 1; li <= m_; ++li) {
      const int l = loc_[li];
      for (int j = 0; j < cat_.set_count(); ++j) {
        cost[j] = admissible(l, j) ? opt_.weights.walk * cat_.walk_cost(l, j) : kInf;
      }
      double* part = &part_[index(li, 0)];
      int* choice = &choice_[index(li, 0)];
      part[0] = 0.0;
      for (Mask k = 1; k <= full_; ++k) {
        const int low = std::countr_zero(k) + 1;
        double best = kInf;
        int arg = -1;
        for (int j : cat_.sets_containing(low)) {
          const Mask sm = cat_.set(j).mask;
          if (cost[j] == kInf || (sm & ~k)) continue;
          const double value = cost[j] + part[k ^ sm];
          if (value < best) {
            best = value;
            arg = j;
          }
        }
        part[k] = best;
        choice[k] = arg;
      }
      double* bundle = &bundle_[index(li, 0)];
      const Mask own = bit(l);
      double single = kInf;
      if (self_single_) {
        const std::vector<LocationId> members{l};
        if (auto j = cat_.find(members); j && admissible(l, *j)) {
          single = opt_.weights.walk * cat_.walk_cost(l, *j);
        }
      }
      for (Mask k = 0; k <= full_; ++k) {
        if (k == 0) {
          bundle[k] = empty_stops_ ? 0.0 : kInf;
        } else if (self_single_) {
          bundle[k] = (k & own) ? single + part[k ^ own] : kInf;
        } else if (self_member_) {
          bundle[k] = (k & own) ? part[k] : kInf;
        } else {
          bundle[k] = part[k];
        }
      }
    }
  }

  // Lower bound that lets a location be used more than once: v(S, cur) is the
  // cheapest way to finish from `cur` after serving S.
  void build_relaxation() {
    const int size = m_ + 1;
    const std::size_t states = static_cast<std::size_t>(full_) + 1;
    v_.assign(states * size, kInf);
    std::vector<double> u(size, kInf);
    for (int cur = 0; cur < size; ++cur) v_[full_ * size + cur] = sp_[cur * size + 0];
    for (Mask s = full_; s-- > 0;) {
      const Mask comp = full_ & ~s;
      for (int li = 1; li < size; ++li) {
        double best = kInf;
        const double* bundle = &bundle_[index(li, 0)];
        for (Mask k = comp; k; k = (k - 1) & comp) {
          const double b = bundle[k];
          if (b == kInf) continue;
          const double value = b + v_[(s | k) * size + li];
          if (value < best) best = value;
        }
        u[li] = best;
      }
      for (int cur = 0; cur < size; ++cur) {
        double best = kInf;
        for (int li = 1; li < size; ++li) {
          if (li == cur || u[li] == kInf) continue;
          best = std::min(best, sp_[cur * size + li] + u[li]);
        }
        v_[s * size + cur] = best;
      }
    }
  }

  const Instance& inst_;
  const ServiceSetCatalog& cat_;
  ExactOptions opt_;
  int n_ = 0;
  int m_ = 0;
  Mask full_ = 0;
  bool self_single_ = false;
  bool self_member_ = false;
  bool empty_stops_ = true;
  std::vector<int> loc_;
  std::vector<double> edge_;
  std::vector<double> sp_;
  std::vector<double> part_;
  std::vector<int> choice_;
  std::vector<double> bundle_;
  std::vector<double> v_;
};

// Submasks of `comp` in increasing numeric order.
class SubmaskRange {
 public:
  explicit SubmaskRange(Mask comp) {
    for (Mask c = comp; c; c &= c - 1) bits_.push_back(c & (~c + 1));
  }
  std::uint64_t count() const { return std::uint64_t{1} << bits_.size(); }
  Mask at(std::uint64_t x) const {
    Mask k = 0;
    for (std::size_t t = 0; x; ++t, x >>= 1) {
      if (x & 1) k |= bits_[t];
    }
    return k;
  }

 private:
  std::vector<Mask> bits_;
};

struct Shared {
  const Problem& problem;
  const ExactOptions& options;
  std::mutex mu;
  Incumbent inc;
  std::atomic<double> inc_cost{kInf};
  std::atomic<std::int64_t> nodes{0};
  std::atomic<bool> aborted{false};
  Clock::time_point start = Clock::now();

  explicit Shared(const Problem& p, const ExactOptions& o) : problem(p), options(o) {}

  void offer(double cost, const std::vector<StopKey>& seq) {
    std::lock_guard<std::mutex> lock(mu);
    if (better_than(cost, seq, inc)) {
      inc.cost = cost;
      inc.seq = seq;
      inc.valid = true;
      inc_cost.store(cost);
    }
  }

  // True when no completion of `prefix` with lower bound `bound` and at least
  // `min_stops` stops can displace the incumbent.
  bool dominated(double bound, const std::vector<StopKey>& prefix, std::size_t min_stops) {
    const double cost = inc_cost.load();
    if (cost == kInf) return false;
    const double tol = tie_tolerance(cost);
    if (bound > cost + tol) return true;
    if (bound < cost - tol) return false;
    std::lock_guard<std::mutex> lock(mu);
    if (min_stops > inc.seq.size()) return true;
    if (min_stops < inc.seq.size()) return false;
    return std::lexicographical_compare(inc.seq.begin(), inc.seq.begin() + prefix.size(),
                                        prefix.begin(), prefix.end());
  }

  bool tick() {
    const std::int64_t count = nodes.fetch_add(1) + 1;
    if (count > options.budget.max_nodes) aborted = true;
    if ((count & 1023) == 0) {
      const double secs = std::chrono::duration<double>(Clock::now() - start).count();
      if (secs > options.budget.max_seconds) aborted = true;
    }
    return !aborted.load(std::memory_order_relaxed);
  }
};

class Worker {
 public:
  Worker(Shared& shared) : sh_(shared), p_(shared.problem) {
    use_memo_ = !shared.options.corollary3;
  }

  void expand_root_child(int li, Mask k) {
    prefix_.clear();
    const double g = p_.edge(0, li) + p_.bundle(li, k);
    prefix_.push_back({li, k});
    if (!sh_.dominated(g + p_.relax(k, li), prefix_, min_stops(k)))
      visit(li, Mask{1} << (li - 1), k, g);
    prefix_.pop_back();
  }

 private:
  std::size_t min_stops(Mask s) const { return prefix_.size() + (s == p_.full() ? 0 : 1); }

  int sets_in_prefix() const {
    int count = 0;
    for (const auto& [li, k] : prefix_) count += p_.set_count(li, k);
    return count;
  }

  void visit(int cur, Mask visited, Mask s, double g) {
    if (!sh_.tick()) return;
    if (use_memo_) {
      const std::uint64_t key = (static_cast<std::uint64_t>(cur) << 48) |
                                (static_cast<std::uint64_t>(visited) << 24) | s;
      auto [it, inserted] = memo_.try_emplace(key, g);
      if (!inserted) {
        if (g >= it->second - tie_tolerance(it->second)) return;
        it->second = g;
      }
      if (memo_.size() > kMemoLimit) memo_.clear();
    }
    const Mask full = p_.full();
    if (s == full) {
      const double total = g + p_.edge(cur, 0);
      if (!sh_.options.corollary3 ||
          static_cast<int>(prefix_.size()) <= sets_in_prefix()) {
        sh_.offer(total, prefix_);
      }
    }
    const SubmaskRange range(full & ~s);
    for (int li = 1; li <= p_.m(); ++li) {
      if (visited & (Mask{1} << (li - 1))) continue;
      const double arrive = g + p_.edge(cur, li);
      for (std::uint64_t x = 0; x < range.count(); ++x) {
        const Mask k = range.at(x);
        const double b = p_.bundle(li, k);
        if (b == kInf) continue;
        const double g2 = arrive + b;
        const Mask s2 = s | k;
        const double bound = g2 + p_.relax(s2, li);
        if (bound == kInf) continue;
        prefix_.push_back({li, k});
        if (!sh_.dominated(bound, prefix_, min_stops(s2))) {
          visit(li, visited | (Mask{1} << (li - 1)), s2, g2);
        }
        prefix_.pop_back();
        if (sh_.aborted.load(std::memory_order_relaxed)) return;
      }
    }
  }

  static constexpr std::size_t kMemoLimit = std::size_t{1} << 22;

  Shared& sh_;
  const Problem& p_;
  bool use_memo_ = true;
  std::vector<StopKey> prefix_;
  std::unordered_map<std::uint64_t, double> memo_;
};

// Greedy descent on the relaxation: repeatedly take the unvisited stop and
// nonempty served set with the smallest bound.
void dive(const Problem& p, Shared& sh) {
  std::vector<StopKey> seq;
  int cur = 0;
  Mask visited = 0;
  Mask s = 0;
  double g = 0.0;
  while (s != p.full()) {
    const SubmaskRange range(p.full() & ~s);
    double best = kInf;
    StopKey pick{-1, 0};
    double pick_g = 0.0;
    for (int li = 1; li <= p.m(); ++li) {
      if (visited & (Mask{1} << (li - 1))) continue;
      for (std::uint64_t x = 1; x < range.count(); ++x) {
        const Mask k = range.at(x);
        const double b = p.bundle(li, k);
        if (b == kInf) continue;
        const double g2 = g + p.edge(cur, li) + b;
        const double bound = g2 + p.relax(s | k, li);
        if (bound < best) {
          best = bound;
          pick = {li, k};
          pick_g = g2;
        }
      }
    }
    if (pick.first < 0) return;
    seq.push_back(pick);
    visited |= Mask{1} << (pick.first - 1);
    s |= pick.second;
    cur = pick.first;
    g = pick_g;
  }
  sh.offer(g + p.edge(cur, 0), seq);
}

}  // namespace

ExactResult solve_exact(const Instance& inst, const ServiceSetCatalog& cat,
                        const ExactOptions& options) {
  if (inst.n > kMaxExactCustomers) {
    throw UnsupportedError("the exact solver handles at most " +
                           std::to_string(kMaxExactCustomers) +
                           " customers; use the heuristic");
  }
  if (!cat.materialized()) {
    throw UnsupportedError("the exact solver needs a materialized catalog");
  }
  if ((options.claim4 || options.corollary1) && !inst.parks_at_all_customers()) {
    throw UnsupportedError(
        "single-customer parking requirements need every customer to be a parking location");
  }
  if (options.budget.max_nodes <= 0 || options.budget.max_seconds <= 0) {
    throw InvalidValueError("search budget limits must be positive");
  }
  for (LocationId c = 1; c <= inst.n; ++c) {
    bool covered = false;
    for (int j : cat.sets_containing(c)) {
      for (LocationId i : inst.parking) covered = covered || cat.pair_admissible(i, j);
      if (covered) break;
    }
    if (!covered) {
      throw InfeasibleError("customer " + std::to_string(c) +
                            " has no admissible parking location and service set");
    }
  }

  const auto start = Clock::now();
  const Problem problem(inst, cat, options);
  Shared shared(problem, options);
  shared.start = start;
  const double load = inst.total_load();

  ExactResult result;
  const double root = problem.root_bound();
  if (root < kInf) {
    dive(problem, shared);
    if (options.budget.require_proof) {
      // Root children in lexicographic order; workers take them in turn.
      std::vector<StopKey> children;
      const SubmaskRange range(problem.full());
      for (int li = 1; li <= problem.m(); ++li) {
        for (std::uint64_t x = 0; x < range.count(); ++x) {
          const Mask k = range.at(x);
          if (problem.bundle(li, k) < kInf) children.push_back({li, k});
        }
      }
      std::atomic<std::size_t> next{0};
      auto work = [&] {
        Worker worker(shared);
        for (std::size_t c = next++; c < children.size(); c = next++) {
          if (shared.aborted) break;
          worker.expand_root_child(children[c].first, children[c].second);
        }
      };
      const int threads = std::max(1, options.threads);
      if (threads == 1) {
        work();
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
      }
    }
  }

  const bool complete = options.budget.require_proof && !shared.aborted;
  const Incumbent& inc = shared.inc;
  if (inc.valid) {
    Solution sol;
    for (const auto& [li, k] : inc.seq) sol.stops.push_back(problem.make_stop(li, k));
    cost_solution(inst, sol);
    result.solution = std::move(sol);
    result.objective = inc.cost + load;
    const bool proved = complete || inc.cost <= root + tie_tolerance(root);
    result.status = proved ? SolveStatus::kOptimal : SolveStatus::kFeasible;
    result.bound = proved ? result.objective : root + load;
  } else if (root == kInf || complete) {
    result.status = SolveStatus::kInfeasible;
    result.bound = kInf;
  } else {
    result.status = SolveStatus::kTimeout;
    result.bound = root + load;
  }
  result.nodes = shared.nodes.load();
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

std::vector<std::string> check_feasible(const Instance& inst, const ServiceSetCatalog& cat,
                                        const Solution& sol) {
  std::vector<std::string> out = evaluate_solution(inst, sol).violations;
  std::set<LocationId> seen_stops;
  for (const Stop& stop : sol.stops) {
    const LocationId at = stop.location;
    if (!seen_stops.insert(at).second) {
      out.push_back("location " + std::to_string(at) + " is parked at more than once");
    }
    if (!inst.is_parking(at)) {
      out.push_back("location " + std::to_string(at) + " is not a parking location");
      continue;
    }
    for (const auto& order : stop.sets) {
      std::vector<LocationId> members = order;
      std::sort(members.begin(), members.end());
      if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
        out.push_back("a walking order at stop " + std::to_string(at) + " repeats a customer");
        continue;
      }
      if (members.empty()) continue;
      if (cat.materialized()) {
        const auto j = cat.find(members);
        if (!j) {
          out.push_back("a set at stop " + std::to_string(at) + " is not in the catalog");
        } else if (!cat.pair_admissible(at, *j)) {
          out.push_back("set " + std::to_string(*j) + " may not be served from location " +
                        std::to_string(at));
        }
      } else if (!cat.admissible(at, members)) {
        out.push_back("a set at stop " + std::to_string(at) + " is not admissible there");
      }
    }
  }
  return out;
}

}  // namespace parkroute
