#include "parkroute/model.h"

#include <algorithm>

#include "parkroute/errors.h"

namespace parkroute {

std::string_view Constraint::tag() const {
  std::string_view n = name;
  return n.substr(0, n.find('('));
}

int MipModel::variable_count(VarRole role) const {
  return static_cast<int>(std::count_if(variables.begin(), variables.end(),
                                        [&](const Variable& v) { return v.role == role; }));
}

int MipModel::row_count(std::string_view tag) const {
  return static_cast<int>(std::count_if(constraints.begin(), constraints.end(),
                                        [&](const Constraint& c) { return c.tag() == tag; }));
}

std::optional<int> MipModel::find_variable(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(variables.size()); ++i) {
    if (variables[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> MipModel::tags() const {
  std::vector<std::string> out;
  for (const Constraint& c : constraints) {
    std::string t(c.tag());
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
  }
  return out;
}

namespace {

void check_options(const Instance& inst, const ServiceSetCatalog& cat,
                   const ModelOptions& options) {
  if (!cat.materialized()) {
    throw UnsupportedError("building a model needs a materialized catalog");
  }
  if ((options.vi_claim4 || options.vi_corollary1) && !inst.parks_at_all_customers()) {
    throw UnsupportedError(
        "single-customer parking inequalities need every customer to be a parking location");
  }
}

bool service_pair(const ServiceSetCatalog& cat, const ModelOptions& options,
                  LocationId i, int j) {
  if (!cat.pair_admissible(i, j)) return false;
  const ServiceSet& s = cat.set(j);
  return !(options.var_reduction && s.size() >= 2 && s.contains(i));
}

std::string pair_name(const char* prefix, int a, int b) {
  return std::string(prefix) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

std::string row_name(const char* tag, std::initializer_list<int> idx) {
  std::string out = tag;
  out += "(";
  bool first = true;
  for (int v : idx) {
    if (!first) out += ",";
    out += std::to_string(v);
    first = false;
  }
  return out + ")";
}

class Builder {
 public:
  Builder(const Instance& inst, const ServiceSetCatalog& cat, const ModelOptions& options)
      : inst_(inst), cat_(cat), options_(options) {
    locations_.push_back(kDepot);
    locations_.insert(locations_.end(), inst.parking.begin(), inst.parking.end());
    const int size = inst.num_locations();
    x_.assign(static_cast<std::size_t>(size) * size, -1);
    v_.assign(static_cast<std::size_t>(size) * size, -1);
    y_.assign(size, {});
  }

  MipModel build() {
    model_.name = inst_.name;
    model_.options = options_;
    add_variables();
    add_rows();
    return std::move(model_);
  }

 private:
  int& x(int i, int k) { return x_[static_cast<std::size_t>(i) * inst_.num_locations() + k]; }
  int& v(int i, int k) { return v_[static_cast<std::size_t>(i) * inst_.num_locations() + k]; }

  int add_var(Variable var) {
    model_.variables.push_back(std::move(var));
    return static_cast<int>(model_.variables.size()) - 1;
  }

  void add_variables() {
    for (int i : locations_) {
      for (int k : locations_) {
        if (i == k) continue;
        x(i, k) = add_var({pair_name("x", i, k), VarRole::kArc, VarDomain::kBinary, i, k, 0.0,
                           1.0, inst_.drive_and_park(i, k)});
      }
    }
    for (int i : inst_.parking) {
      y_[i].assign(cat_.set_count(), -1);
      for (int j = 0; j < cat_.set_count(); ++j) {
        if (!service_pair(cat_, options_, i, j)) continue;
        const double cost = cat_.walk_cost(i, j) + inst_.load_per_package * cat_.set(j).size();
        y_[i][j] = add_var({pair_name("y", i, j), VarRole::kService, VarDomain::kBinary, i, j,
                            0.0, 1.0, cost});
      }
    }
    for (int i : locations_) {
      for (int k : inst_.parking) {
        if (i == k) continue;
        v(i, k) = add_var({pair_name("v", i, k), VarRole::kFlow, VarDomain::kInteger, i, k, 0.0,
                           static_cast<double>(inst_.n), 0.0});
      }
    }
  }

  void add_row(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    model_.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
  }

  // sum over k of x(k, i), scaled by `coef`.
  void inflow(int i, double coef, std::vector<Term>& out) {
    for (int k : locations_) {
      if (k != i) out.push_back({x(k, i), coef});
    }
  }

  void add_rows() {
    const int n = inst_.n;
    std::vector<Term> t;

    for (int k : inst_.parking) t.push_back({x(kDepot, k), 1.0});
    add_row("eq2.depart", std::move(t), Sense::kEqual, 1.0);
    t = {};
    inflow(kDepot, 1.0, t);
    add_row("eq3.return", std::move(t), Sense::kEqual, 1.0);

    for (int c = 1; c <= n; ++c) {
      t = {};
      for (int i : inst_.parking) {
        for (int j : cat_.sets_containing(c)) {
          if (y_[i][j] >= 0) t.push_back({y_[i][j], 1.0});
        }
      }
      add_row(row_name("eq4.cover", {c}), std::move(t), Sense::kEqual, 1.0);
    }

    for (int i : inst_.parking) {
      t = {};
      inflow(i, 1.0, t);
      for (int k : locations_) {
        if (k != i) t.push_back({x(i, k), -1.0});
      }
      add_row(row_name("eq5.balance", {i}), std::move(t), Sense::kEqual, 0.0);
    }

    for (int i : inst_.parking) {
      for (int j = 0; j < cat_.set_count(); ++j) {
        if (y_[i][j] < 0) continue;
        t = {{y_[i][j], 1.0}};
        inflow(i, -1.0, t);
        add_row(row_name("eq6.link", {i, j}), std::move(t), Sense::kLessEqual, 0.0);
      }
    }

    t = {};
    for (int k : inst_.parking) t.push_back({v(kDepot, k), 1.0});
    add_row("eq7.flow.source", std::move(t), Sense::kEqual, static_cast<double>(n));

    for (int i : locations_) {
      for (int k : inst_.parking) {
        if (i == k) continue;
        add_row(row_name("eq8.flow.cap", {i, k}),
                {{v(i, k), 1.0}, {x(i, k), -static_cast<double>(n)}}, Sense::kLessEqual, 0.0);
      }
    }

    // Conservation at the depot would read sum_k v(k,0) = 0 with no v(k,0)
    // variables and n packages leaving; it is stated for parking nodes only.
    for (int i : inst_.parking) {
      t = {};
      for (int k : locations_) {
        if (k != i) t.push_back({v(k, i), 1.0});
      }
      for (int k : inst_.parking) {
        if (k != i) t.push_back({v(i, k), -1.0});
      }
      for (int j = 0; j < cat_.set_count(); ++j) {
        if (y_[i][j] >= 0) t.push_back({y_[i][j], -static_cast<double>(cat_.set(j).size())});
      }
      add_row(row_name("eq9.flow.conserve", {i}), std::move(t), Sense::kEqual, 0.0);
    }

    add_valid_inequalities();
  }

  int singleton_var(int i) {
    const std::vector<LocationId> single{i};
    const auto j = cat_.find(single);
    if (!j || y_[i][*j] < 0) {
      throw InfeasibleError("customer " + std::to_string(i) + " has no singleton service set");
    }
    return y_[i][*j];
  }

  void add_valid_inequalities() {
    std::vector<Term> t;
    if (options_.vi_claim3) {
      for (int i : inst_.parking) {
        t = {};
        inflow(i, 1.0, t);
        for (int j : cat_.sets_containing(i)) {
          if (y_[i][j] >= 0) t.push_back({y_[i][j], -1.0});
        }
        add_row(row_name("vi.claim3", {i}), std::move(t), Sense::kEqual, 0.0);
      }
    }
    if (options_.vi_claim4) {
      for (int i : inst_.parking) {
        t = {};
        inflow(i, 1.0, t);
        t.push_back({singleton_var(i), -1.0});
        add_row(row_name("vi.claim4", {i}), std::move(t), Sense::kEqual, 0.0);
      }
    }
    if (options_.vi_corollary1) {
      t = {};
      for (int i : inst_.parking) {
        inflow(i, 1.0, t);
        t.push_back({singleton_var(i), -1.0});
      }
      add_row("vi.corollary1", std::move(t), Sense::kEqual, 0.0);
    }
    if (options_.vi_claim5) {
      for (int i : inst_.parking) {
        for (int k : locations_) {
          if (k == i) continue;
          t = {{x(k, i), 1.0}};
          for (int y : y_[i]) {
            if (y >= 0) t.push_back({y, -1.0});
          }
          add_row(row_name("vi.claim5", {k, i}), std::move(t), Sense::kLessEqual, 0.0);
        }
      }
    }
    if (options_.vi_corollary3) {
      t = {};
      for (int i : locations_) {
        for (int k : inst_.parking) {
          if (k != i) t.push_back({x(i, k), 1.0});
        }
      }
      for (int i : inst_.parking) {
        for (int y : y_[i]) {
          if (y >= 0) t.push_back({y, -1.0});
        }
      }
      add_row("vi.corollary3", std::move(t), Sense::kLessEqual, 0.0);
    }
  }

  const Instance& inst_;
  const ServiceSetCatalog& cat_;
  ModelOptions options_;
  std::vector<int> locations_;  // depot first, then parking ids
  std::vector<int> x_;
  std::vector<int> v_;
  std::vector<std::vector<int>> y_;
  MipModel model_;
};

}  // namespace

MipModel build_model(const Instance& inst, const ServiceSetCatalog& cat,
                     const ModelOptions& options) {
  check_options(inst, cat, options);
  return Builder(inst, cat, options).build();
}

ModelSize model_size(const Instance& inst, const ServiceSetCatalog& cat,
                     const ModelOptions& options) {
  check_options(inst, cat, options);
  const std::int64_t m = static_cast<std::int64_t>(inst.parking.size());
  ModelSize size;
  size.arc_vars = (m + 1) * m;
  size.flow_vars = m * m;
  for (int i : inst.parking) {
    for (int j = 0; j < cat.set_count(); ++j) {
      if (service_pair(cat, options, i, j)) ++size.service_vars;
    }
  }
  for (const char* tag : kRowTags) size.rows[tag] = 0;
  size.rows["eq2.depart"] = 1;
  size.rows["eq3.return"] = 1;
  size.rows["eq4.cover"] = inst.n;
  size.rows["eq5.balance"] = m;
  size.rows["eq6.link"] = size.service_vars;
  size.rows["eq7.flow.source"] = 1;
  size.rows["eq8.flow.cap"] = m * m;
  size.rows["eq9.flow.conserve"] = m;
  if (options.vi_claim3) size.rows["vi.claim3"] = m;
  if (options.vi_claim4) size.rows["vi.claim4"] = m;
  if (options.vi_corollary1) size.rows["vi.corollary1"] = 1;
  if (options.vi_claim5) size.rows["vi.claim5"] = m * m;
  if (options.vi_corollary3) size.rows["vi.corollary3"] = 1;
  return size;
}

}  // namespace parkroute
