#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>
#include <sstream>
#include <string>
#include <vector>

#include "morphsynth/mcp.hpp"
#include "morphsynth/model.hpp"
#include "morphsynth/qap.hpp"

namespace morphsynth {

struct LpSummary {
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

namespace detail {

/// LP coefficients print as exact terminating decimals; anything else
/// cannot be written without loss.
inline std::string lp_number(const Rational& r) {
  const std::string s = r.str();
  if (s.find('/') != std::string::npos)
    throw validation_error("coefficient " + s + " has no terminating decimal form for LP output");
  return s;
}

inline std::string sanitize(std::string_view id) {
  std::string out;
  for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

inline std::string var_name(std::string_view group, std::string_view item) {
  return "x_" + sanitize(group) + "_" + sanitize(item);
}

struct LpTerm {
  Rational coef;
  std::string var;
};

inline void write_terms(std::ostream& os, const std::vector<LpTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef < Rational(0)) {
      os << (first ? "- " : " - ") << lp_number(-t.coef) << " " << t.var;
    } else {
      os << (first ? "" : " + ") << lp_number(t.coef) << " " << t.var;
    }
    first = false;
  }
}

}  // namespace detail

/// Admissibility of a morphology as a 0-1 program: binary selector per
/// alternative, one-per-part equalities, and a mutual-exclusion row for
/// every declared pair below the admissibility threshold. The additive
/// objective rewards better priorities ((k+1) - r) and falls back to 1
/// when a part carries no priorities.
inline LpSummary export_lp_ma(const Morphology& m, std::string_view scope, int min_level, std::ostream& os) {
  if (min_level < 1 || min_level > m.l)
    throw validation_error("min_level outside 1.." + std::to_string(m.l));
  const auto parts = m.parts_under(scope);
  LpSummary sum;

  std::vector<detail::LpTerm> objective;
  for (const auto* p : parts)
    for (const auto& a : p->alternatives) {
      Rational coef(1);
      if (a.priority || !a.fuzzy_priority.empty()) coef = Rational(m.k + 1 - m.crisp_priority(a));
      objective.push_back({coef, detail::var_name(p->id, a.id)});
      ++sum.variables;
    }

  os << "Maximize\n obj: ";
  detail::write_terms(os, objective);
  os << "\nSubject To\n";
  for (const auto* p : parts) {
    std::vector<detail::LpTerm> row;
    for (const auto& a : p->alternatives) row.push_back({Rational(1), detail::var_name(p->id, a.id)});
    os << " one_" << detail::sanitize(p->id) << ": ";
    detail::write_terms(os, row);
    os << " = 1\n";
    ++sum.constraints;
  }
  std::size_t pair_index = 0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      for (const auto& a : parts[i]->alternatives)
        for (const auto& b : parts[j]->alternatives)
          if (const auto* e = m.compat.find(a.id, b.id))
            if (m.crisp_level(*e) < min_level) {
              os << " incomp_" << ++pair_index << ": " << detail::var_name(parts[i]->id, a.id) << " + "
                 << detail::var_name(parts[j]->id, b.id) << " <= 1\n";
              ++sum.constraints;
            }
  os << "Bounds\nBinary\n";
  for (const auto* p : parts)
    for (const auto& a : p->alternatives) os << " " << detail::var_name(p->id, a.id) << "\n";
  os << "End\n";
  return sum;
}

/// Multiple choice knapsack as a 0-1 program; vector profits export their
/// first component.
inline LpSummary export_lp_mcp(const McpInstance& inst, std::ostream& os) {
  inst.check();
  LpSummary sum;
  std::vector<detail::LpTerm> objective;
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) {
      objective.push_back({it.profit.front(), detail::var_name(g.id, it.id)});
      ++sum.variables;
    }
  os << "Maximize\n obj: ";
  detail::write_terms(os, objective);
  os << "\nSubject To\n";
  for (const auto& g : inst.groups) {
    std::vector<detail::LpTerm> row;
    for (const auto& it : g.items) row.push_back({Rational(1), detail::var_name(g.id, it.id)});
    os << " one_" << detail::sanitize(g.id) << ": ";
    detail::write_terms(os, row);
    os << " = 1\n";
    ++sum.constraints;
  }
  std::vector<detail::LpTerm> budget;
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) budget.push_back({it.weight, detail::var_name(g.id, it.id)});
  os << " budget: ";
  detail::write_terms(os, budget);
  os << " <= " << detail::lp_number(inst.budget) << "\n";
  ++sum.constraints;
  os << "Bounds\nBinary\n";
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) os << " " << detail::var_name(g.id, it.id) << "\n";
  os << "End\n";
  return sum;
}

/// Linearized quadratic assignment: a McCormick product variable per
/// positive pair profit (y <= x_a, y <= x_b, y >= x_a + x_b - 1) joins the
/// additive objective. With no positive pair profits the file coincides
/// with the multiple choice export of the same instance.
inline LpSummary export_lp_qap(const QapInstance& inst, std::ostream& os) {
  inst.check();
  LpSummary sum;
  std::map<std::string, const std::string*> group_of;  // item id -> group id
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) group_of[it.id] = &g.id;

  struct PairVar {
    std::string name, xa, xb;
    Rational coef;
  };
  std::vector<PairVar> pairs;
  for (const auto& [key, d] : inst.pair_profit) {
    if (!(d > Rational(0))) continue;
    const auto ga = group_of.find(key.first), gb = group_of.find(key.second);
    if (ga == group_of.end() || gb == group_of.end())
      throw validation_error("pair profit references unknown item (" + key.first + ", " + key.second + ")");
    PairVar pv;
    pv.xa = detail::var_name(*ga->second, key.first);
    pv.xb = detail::var_name(*gb->second, key.second);
    pv.name = "y_" + detail::sanitize(key.first) + "__" + detail::sanitize(key.second);
    pv.coef = d;
    pairs.push_back(std::move(pv));
  }

  std::vector<detail::LpTerm> objective;
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) {
      objective.push_back({it.profit.front(), detail::var_name(g.id, it.id)});
      ++sum.variables;
    }
  for (const auto& pv : pairs) {
    objective.push_back({pv.coef, pv.name});
    ++sum.variables;
  }

  os << "Maximize\n obj: ";
  detail::write_terms(os, objective);
  os << "\nSubject To\n";
  for (const auto& g : inst.groups) {
    std::vector<detail::LpTerm> row;
    for (const auto& it : g.items) row.push_back({Rational(1), detail::var_name(g.id, it.id)});
    os << " one_" << detail::sanitize(g.id) << ": ";
    detail::write_terms(os, row);
    os << (inst.at_most_one ? " <= 1\n" : " = 1\n");
    ++sum.constraints;
  }
  std::vector<detail::LpTerm> budget;
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) budget.push_back({it.weight, detail::var_name(g.id, it.id)});
  os << " budget: ";
  detail::write_terms(os, budget);
  os << " <= " << detail::lp_number(inst.budget) << "\n";
  ++sum.constraints;
  std::size_t idx = 0;
  for (const auto& pv : pairs) {
    ++idx;
    os << " mc_" << idx << "_a: " << pv.name << " - " << pv.xa << " <= 0\n";
    os << " mc_" << idx << "_b: " << pv.name << " - " << pv.xb << " <= 0\n";
    os << " mc_" << idx << "_c: " << pv.name << " - " << pv.xa << " - " << pv.xb << " >= -1\n";
    sum.constraints += 3;
  }
  os << "Bounds\nBinary\n";
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) os << " " << detail::var_name(g.id, it.id) << "\n";
  for (const auto& pv : pairs) os << " " << pv.name << "\n";
  os << "End\n";
  return sum;
}

// ---------------------------------------------------------------------------
// Internal parser for the emitted dialect, used to grammar-check exports
// and to evaluate constraint systems in tests.

struct LpConstraint {
  std::string name;
  std::vector<std::pair<Rational, std::string>> terms;
  std::string relation;  // "<=", ">=", "="
  Rational rhs;
};

struct LpModel {
  std::vector<std::pair<Rational, std::string>> objective;
  std::vector<LpConstraint> constraints;
  std::vector<std::string> binaries;

  bool satisfied(const std::map<std::string, int>& assignment) const {
    for (const auto& c : constraints) {
      Rational lhs;
      for (const auto& [coef, var] : c.terms) {
        const auto it = assignment.find(var);
        lhs += coef * Rational(it == assignment.end() ? 0 : it->second);
      }
      if (c.relation == "<=" && lhs > c.rhs) return false;
      if (c.relation == ">=" && lhs < c.rhs) return false;
      if (c.relation == "=" && lhs != c.rhs) return false;
    }
    return true;
  }
};

namespace detail {

inline std::vector<std::string> lp_tokens(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto comment = line.find('\\');
    if (comment != std::string::npos) line.erase(comment);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  return tokens;
}

inline bool lp_is_number(const std::string& t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i == t.size()) return false;
  bool digit = false;
  for (; i < t.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(t[i]))) digit = true;
    else if (t[i] != '.') return false;
  }
  return digit;
}

}  // namespace detail

/// Strict parser for the dialect this module writes: sections Maximize,
/// Subject To, Bounds, Binary, End in that order; rows of the form
/// `name: [+-] coef var ... (<=|>=|=) rhs`.
inline LpModel parse_lp(std::istream& in) {
  const auto tokens = detail::lp_tokens(in);
  std::size_t i = 0;
  auto expect = [&](const std::string& t) {
    if (i >= tokens.size() || tokens[i] != t)
      throw validation_error("LP parse: expected '" + t + "' at token " + std::to_string(i));
    ++i;
  };
  auto parse_terms = [&](std::vector<std::pair<Rational, std::string>>& out) {
    int sign = 1;
    while (i < tokens.size()) {
      const std::string& t = tokens[i];
      if (t == "+") { sign = 1; ++i; continue; }
      if (t == "-") { sign = -1; ++i; continue; }
      if (detail::lp_is_number(t)) {
        Rational coef = Rational::parse(t);
        ++i;
        if (i >= tokens.size()) throw validation_error("LP parse: dangling coefficient");
        const std::string var = tokens[i++];
        if (detail::lp_is_number(var)) throw validation_error("LP parse: coefficient without variable");
        out.emplace_back(sign < 0 ? -coef : coef, var);
        sign = 1;
        continue;
      }
      if (t == "<=" || t == ">=" || t == "=") return;
      if (t == "Subject" || t == "Bounds" || t == "Binary" || t == "End") return;
      // bare variable, implicit coefficient 1
      out.emplace_back(Rational(sign), t);
      sign = 1;
      ++i;
    }
  };

  LpModel model;
  expect("Maximize");
  if (i >= tokens.size() || tokens[i].back() != ':') throw validation_error("LP parse: objective needs a label");
  ++i;
  parse_terms(model.objective);
  expect("Subject");
  expect("To");
  while (i < tokens.size() && tokens[i] != "Bounds") {
    LpConstraint c;
    if (tokens[i].back() != ':') throw validation_error("LP parse: constraint needs a label: " + tokens[i]);
    c.name = tokens[i].substr(0, tokens[i].size() - 1);
    ++i;
    parse_terms(c.terms);
    if (i >= tokens.size()) throw validation_error("LP parse: constraint without relation");
    c.relation = tokens[i++];
    if (c.relation != "<=" && c.relation != ">=" && c.relation != "=")
      throw validation_error("LP parse: bad relation " + c.relation);
    if (i >= tokens.size() || !detail::lp_is_number(tokens[i]))
      throw validation_error("LP parse: constraint without numeric right-hand side");
    c.rhs = Rational::parse(tokens[i++]);
    model.constraints.push_back(std::move(c));
  }
  expect("Bounds");
  expect("Binary");
  while (i < tokens.size() && tokens[i] != "End") model.binaries.push_back(tokens[i++]);
  expect("End");
  if (i != tokens.size()) throw validation_error("LP parse: trailing tokens after End");
  return model;
}

enum class LpKind { ma, mcp, qap };

}  // namespace morphsynth
