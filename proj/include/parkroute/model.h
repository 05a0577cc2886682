#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parkroute/instance.h"
#include "parkroute/service_sets.h"

namespace parkroute {

struct ModelOptions {
  bool vi_claim3 = false;       // parking at customer i serves a set containing i
  bool vi_claim4 = false;       // parking at customer i serves {i}
  bool vi_corollary1 = false;   // aggregated form of vi_claim4
  bool vi_claim5 = false;       // every parking event serves a set
  bool vi_corollary3 = false;   // #parking events <= #sets served
  bool var_reduction = false;   // drop y(i, sigma) with i in sigma, |sigma| >= 2

  bool operator==(const ModelOptions&) const = default;
};

// x(i,k): drive from i to k (and park at k); y(i,set): serve a catalog set
// while parked at i; v(i,k): packages carried on arc (i,k).
enum class VarRole { kArc, kService, kFlow };
enum class VarDomain { kBinary, kInteger, kContinuous };

struct Variable {
  std::string name;
  VarRole role = VarRole::kArc;
  VarDomain domain = VarDomain::kBinary;
  int first = 0;   // i
  int second = 0;  // k, or the catalog set index for kService
  double lower = 0.0;
  double upper = 1.0;
  double objective = 0.0;

  bool operator==(const Variable&) const = default;
};

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int var = 0;
  double coef = 0.0;
  bool operator==(const Term&) const = default;
};

struct Constraint {
  std::string name;  // "<tag>" or "<tag>(<indices>)"
  std::vector<Term> terms;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;

  std::string_view tag() const;
  bool operator==(const Constraint&) const = default;
};

struct MipModel {
  std::string name;
  ModelOptions options;
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;

  int variable_count(VarRole role) const;
  int row_count(std::string_view tag) const;
  std::optional<int> find_variable(std::string_view name) const;
  std::vector<std::string> tags() const;  // in first-appearance order

  bool operator==(const MipModel&) const = default;
};

// Row families in build order; the integrality and binary domains are
// carried by the variables rather than by rows.
inline constexpr const char* kRowTags[] = {
    "eq2.depart",        "eq3.return",         "eq4.cover",     "eq5.balance",
    "eq6.link",          "eq7.flow.source",    "eq8.flow.cap",  "eq9.flow.conserve",
    "vi.claim3",         "vi.claim4",          "vi.corollary1", "vi.claim5",
    "vi.corollary3"};

// Builds the flow formulation over a materialized catalog. The objective is
// sum x(i,k) d(i,k) + sum y(i,set) (w(i,set) + f |set|). Throws
// UnsupportedError when customer-parking inequalities are requested and the
// parking locations are not all customers.
MipModel build_model(const Instance& inst, const ServiceSetCatalog& cat,
                     const ModelOptions& options = {});

struct ModelSize {
  std::int64_t arc_vars = 0;
  std::int64_t service_vars = 0;
  std::int64_t flow_vars = 0;
  std::map<std::string, std::int64_t> rows;  // per tag
};

// Variable and row counts of build_model without building it.
ModelSize model_size(const Instance& inst, const ServiceSetCatalog& cat,
                     const ModelOptions& options = {});

// CPLEX LP text: one objective or row per line, sections Minimize,
// Subject To, Bounds, General, Binary, End.
std::string export_lp(const MipModel& model);
// Reads text produced by export_lp. Throws ParseError.
MipModel parse_lp(std::string_view text);

// Number formatting shared by the LP writer: shortest round-trip decimal.
std::string format_number(double value);

}  // namespace parkroute
