#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "parkroute/errors.h"
#include "parkroute/model.h"

namespace parkroute {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "<=";
    case Sense::kEqual: return "=";
    case Sense::kGreaterEqual: return ">=";
  }
  return "=";
}

void write_terms(std::ostream& out, const MipModel& model, const std::vector<Term>& terms) {
  bool first = true;
  for (const Term& t : terms) {
    const double mag = std::abs(t.coef);
    if (first) {
      out << (t.coef < 0 ? " -" : "");
    } else {
      out << (t.coef < 0 ? " - " : " + ");
    }
    if (first && t.coef >= 0) out << " ";
    if (mag != 1.0) out << format_number(mag) << " ";
    out << model.variables[t.var].name;
    first = false;
  }
}

int flag(bool b) { return b ? 1 : 0; }

}  // namespace

std::string export_lp(const MipModel& model) {
  std::ostringstream out;
  const ModelOptions& o = model.options;
  out << "\\ parkroute delivery-with-parking model\n";
  out << "\\ name: " << model.name << "\n";
  out << "\\ options: claim3=" << flag(o.vi_claim3) << " claim4=" << flag(o.vi_claim4)
      << " corollary1=" << flag(o.vi_corollary1) << " claim5=" << flag(o.vi_claim5)
      << " corollary3=" << flag(o.vi_corollary3) << " reduction=" << flag(o.var_reduction)
      << "\n";
  out << "Minimize\n obj:";
  std::vector<Term> objective;
  for (int i = 0; i < static_cast<int>(model.variables.size()); ++i) {
    if (model.variables[i].role != VarRole::kFlow || model.variables[i].objective != 0.0) {
      objective.push_back({i, model.variables[i].objective});
    }
  }
  for (std::size_t t = 0; t < objective.size(); ++t) {
    const double c = objective[t].coef;
    out << (t == 0 ? (c < 0 ? " -" : " ") : (c < 0 ? " - " : " + "));
    out << format_number(std::abs(c)) << " " << model.variables[objective[t].var].name;
  }
  out << "\nSubject To\n";
  for (const Constraint& c : model.constraints) {
    out << " " << c.name << ":";
    write_terms(out, model, c.terms);
    out << " " << sense_text(c.sense) << " " << format_number(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const Variable& v : model.variables) {
    if (v.domain == VarDomain::kBinary) continue;
    out << " " << format_number(v.lower) << " <= " << v.name << " <= ";
    out << (std::isinf(v.upper) ? std::string("+inf") : format_number(v.upper)) << "\n";
  }
  out << "General\n";
  for (const Variable& v : model.variables) {
    if (v.domain == VarDomain::kInteger) out << " " << v.name << "\n";
  }
  out << "Binary\n";
  for (const Variable& v : model.variables) {
    if (v.domain == VarDomain::kBinary) out << " " << v.name << "\n";
  }
  out << "End\n";
  return out.str();
}

namespace {

enum class Section { kHeader, kObjective, kRows, kBounds, kGeneral, kBinary, kEnd };

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_number(const std::string& tok, double& value) {
  if (tok == "+inf" || tok == "inf" || tok == "+infinity") {
    value = INFINITY;
    return true;
  }
  if (tok == "-inf" || tok == "-infinity") {
    value = -INFINITY;
    return true;
  }
  const char* begin = tok.data();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, tok.data() + tok.size(), value);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

struct PendingTerm {
  std::string var;
  double coef;
};

// Parses "[-] [c] name + [c] name - ..." starting at tokens[pos]; stops at a
// sense token or the end.
std::vector<PendingTerm> parse_expression(const std::vector<std::string>& tokens,
                                          std::size_t& pos, int line_no) {
  std::vector<PendingTerm> terms;
  double sign = 1.0;
  double coef = 1.0;
  bool have_coef = false;
  for (; pos < tokens.size(); ++pos) {
    const std::string& tok = tokens[pos];
    if (tok == "<=" || tok == ">=" || tok == "=" || tok == "=<" || tok == "=>") break;
    if (tok == "+") continue;
    if (tok == "-") {
      sign = -sign;
      continue;
    }
    double value = 0.0;
    if (parse_number(tok, value)) {
      if (have_coef) throw ParseError("LP line " + std::to_string(line_no) + ": two coefficients");
      coef = value;
      have_coef = true;
      continue;
    }
    std::string name = tok;
    if (name[0] == '-') {
      sign = -sign;
      name.erase(0, 1);
    }
    terms.push_back({name, sign * coef});
    sign = 1.0;
    coef = 1.0;
    have_coef = false;
  }
  if (have_coef) throw ParseError("LP line " + std::to_string(line_no) + ": dangling number");
  return terms;
}

bool decode_name(const std::string& name, Variable& v) {
  if (name.size() < 5 || name[1] != '_') return false;
  const auto sep = name.find('_', 2);
  if (sep == std::string::npos) return false;
  int a = 0;
  int b = 0;
  const char* s = name.data();
  if (std::from_chars(s + 2, s + sep, a).ptr != s + sep) return false;
  if (std::from_chars(s + sep + 1, s + name.size(), b).ptr != s + name.size()) return false;
  switch (name[0]) {
    case 'x': v.role = VarRole::kArc; break;
    case 'y': v.role = VarRole::kService; break;
    case 'v': v.role = VarRole::kFlow; break;
    default: return false;
  }
  v.first = a;
  v.second = b;
  return true;
}

bool read_flag(const std::string& text, const std::string& key) {
  const auto at = text.find(key + "=");
  return at != std::string::npos && text.compare(at + key.size() + 1, 1, "1") == 0;
}

}  // namespace

MipModel parse_lp(std::string_view text) {
  MipModel model;
  Section section = Section::kHeader;
  std::vector<std::pair<std::string, double>> objective;
  struct PendingRow {
    std::string name;
    std::vector<PendingTerm> terms;
    Sense sense;
    double rhs;
  };
  std::vector<PendingRow> rows;
  std::unordered_map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> general;
  std::vector<std::string> binary;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '\\') {
      if (line.rfind("\\ name:", 0) == 0) {
        model.name = line.size() > 8 ? line.substr(8) : "";
      } else if (line.rfind("\\ options:", 0) == 0) {
        ModelOptions& o = model.options;
        o.vi_claim3 = read_flag(line, "claim3");
        o.vi_claim4 = read_flag(line, "claim4");
        o.vi_corollary1 = read_flag(line, "corollary1");
        o.vi_claim5 = read_flag(line, "claim5");
        o.vi_corollary3 = read_flag(line, "corollary3");
        o.var_reduction = read_flag(line, "reduction");
      }
      continue;
    }
    if (line[0] != ' ') {
      if (line == "Minimize") section = Section::kObjective;
      else if (line == "Subject To") section = Section::kRows;
      else if (line == "Bounds") section = Section::kBounds;
      else if (line == "General") section = Section::kGeneral;
      else if (line == "Binary") section = Section::kBinary;
      else if (line == "End") section = Section::kEnd;
      else throw ParseError("LP line " + std::to_string(line_no) + ": unknown section '" + line + "'");
      continue;
    }
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;
    switch (section) {
      case Section::kObjective:
      case Section::kRows: {
        const std::string& label = tok[0];
        if (label.empty() || label.back() != ':') {
          throw ParseError("LP line " + std::to_string(line_no) + ": missing row label");
        }
        std::size_t pos = 1;
        auto terms = parse_expression(tok, pos, line_no);
        const std::string name = label.substr(0, label.size() - 1);
        if (section == Section::kObjective) {
          for (auto& t : terms) objective.emplace_back(t.var, t.coef);
          break;
        }
        if (pos + 2 != tok.size()) {
          throw ParseError("LP line " + std::to_string(line_no) + ": expected '<sense> <rhs>'");
        }
        Sense sense = Sense::kEqual;
        if (tok[pos] == "<=" || tok[pos] == "=<") sense = Sense::kLessEqual;
        else if (tok[pos] == ">=" || tok[pos] == "=>") sense = Sense::kGreaterEqual;
        double rhs = 0.0;
        if (!parse_number(tok[pos + 1], rhs)) {
          throw ParseError("LP line " + std::to_string(line_no) + ": bad right-hand side");
        }
        rows.push_back({name, std::move(terms), sense, rhs});
        break;
      }
      case Section::kBounds: {
        double lo = 0.0;
        double hi = 0.0;
        if (tok.size() != 5 || tok[1] != "<=" || tok[3] != "<=" || !parse_number(tok[0], lo) ||
            !parse_number(tok[4], hi)) {
          throw ParseError("LP line " + std::to_string(line_no) + ": expected 'lo <= var <= hi'");
        }
        bounds[tok[2]] = {lo, hi};
        break;
      }
      case Section::kGeneral:
        general.insert(general.end(), tok.begin(), tok.end());
        break;
      case Section::kBinary:
        binary.insert(binary.end(), tok.begin(), tok.end());
        break;
      default:
        throw ParseError("LP line " + std::to_string(line_no) + ": content outside a section");
    }
  }
  if (section != Section::kEnd) throw ParseError("LP text has no End marker");

  std::unordered_map<std::string, int> index;
  auto declare = [&](const std::string& name, VarDomain domain) {
    if (index.count(name)) return;
    Variable v;
    v.name = name;
    v.domain = domain;
    if (!decode_name(name, v)) {
      throw ParseError("LP variable '" + name + "' is not named x_i_k, y_i_j or v_i_k");
    }
    v.lower = 0.0;
    v.upper = domain == VarDomain::kBinary ? 1.0 : INFINITY;
    if (auto b = bounds.find(name); b != bounds.end()) {
      v.lower = b->second.first;
      v.upper = b->second.second;
    }
    index.emplace(name, static_cast<int>(model.variables.size()));
    model.variables.push_back(std::move(v));
  };
  for (const auto& name : binary) declare(name, VarDomain::kBinary);
  for (const auto& name : general) declare(name, VarDomain::kInteger);
  for (const auto& [name, coef] : objective) declare(name, VarDomain::kContinuous);
  for (const auto& row : rows) {
    for (const auto& t : row.terms) declare(t.var, VarDomain::kContinuous);
  }
  for (const auto& [name, coef] : objective) model.variables[index.at(name)].objective = coef;
  for (auto& row : rows) {
    Constraint c;
    c.name = std::move(row.name);
    c.sense = row.sense;
    c.rhs = row.rhs;
    for (const auto& t : row.terms) c.terms.push_back({index.at(t.var), t.coef});
    model.constraints.push_back(std::move(c));
  }
  return model;
}

}  // namespace parkroute
