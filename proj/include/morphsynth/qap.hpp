#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morphsynth/mcp.hpp"
#include "morphsynth/model.hpp"

namespace morphsynth {

/// Quadratic assignment over groups: linear item profits plus pairwise
/// compatibility profits between selected items of distinct groups. With
/// at_most_one a group may stay empty; otherwise exactly one item per
/// group is selected.
struct QapInstance {
  std::vector<McpGroup> groups;
  std::map<CompatibilityTable::Key, Rational> pair_profit;  // unordered cross-group pairs, >= 0
  Rational budget;
  bool at_most_one = false;

  void check() const {
    if (groups.empty()) throw validation_error("assignment instance without groups");
    for (const auto& g : groups)
      if (g.items.empty()) throw validation_error("group " + g.id + " is empty");
    for (const auto& [key, d] : pair_profit)
      if (d < Rational(0)) throw validation_error("negative pair profit on (" + key.first + ", " + key.second + ")");
  }

  Rational pair(const std::string& a, const std::string& b) const {
    const auto it = pair_profit.find(CompatibilityTable::key(a, b));
    return it == pair_profit.end() ? Rational(0) : it->second;
  }
};

/// Derivation from a ranked morphology: linear profits and weights follow
/// the multiple-choice derivation; every declared compatibility level
/// becomes a pair profit, undeclared pairs contribute nothing.
inline QapInstance derive_qap_instance(const Morphology& m, const McpConfig& cfg, Rational budget) {
  const McpInstance base = derive_mcp_instance(m, cfg, budget);
  QapInstance inst;
  inst.groups = base.groups;
  inst.budget = budget;
  for (const auto& [key, e] : m.compat.entries())
    inst.pair_profit[key] = Rational(m.crisp_level(e));
  return inst;
}

/// Objective of a partial selection: sum of item profits plus pair profits
/// over all selected cross-group pairs.
inline Rational qap_objective(const QapInstance& inst,
                              const std::vector<std::pair<std::string, std::string>>& selection) {
  std::map<std::string, const McpItem*> chosen;  // group -> item
  Rational value;
  for (const auto& [gid, iid] : selection) {
    if (chosen.count(gid)) throw validation_error("two items selected from group " + gid);
    const McpItem* found = nullptr;
    for (const auto& g : inst.groups)
      if (g.id == gid)
        for (const auto& it : g.items)
          if (it.id == iid) found = &it;
    if (!found) throw validation_error("unknown selection (" + gid + ", " + iid + ")");
    chosen[gid] = found;
    value += found->scalar_profit();
  }
  for (auto a = chosen.begin(); a != chosen.end(); ++a) {
    auto b = a;
    for (++b; b != chosen.end(); ++b) value += inst.pair(a->second->id, b->second->id);
  }
  return value;
}

struct QapSolution {
  std::vector<std::pair<std::string, std::string>> selection;
  Rational objective;
  Rational weight;
};

namespace detail {

struct QapSearch {
  const QapInstance& inst;
  std::size_t cap;
  std::size_t visited = 0;
  std::vector<std::optional<std::size_t>> pick;
  std::optional<QapSolution> best;

  explicit QapSearch(const QapInstance& i, std::size_t c) : inst(i), cap(c), pick(i.groups.size()) {}

  void run(std::size_t g, Rational value, Rational weight) {
    if (g == inst.groups.size()) {
      if (++visited > cap) throw limit_error("assignment search exceeded its cap");
      if (!best || value > best->objective) {  // strict: keeps lexicographically first
        QapSolution sol;
        sol.objective = value;
        sol.weight = weight;
        for (std::size_t t = 0; t < pick.size(); ++t)
          if (pick[t]) sol.selection.emplace_back(inst.groups[t].id, inst.groups[t].items[*pick[t]].id);
        best = std::move(sol);
      }
      return;
    }
    for (std::size_t j = 0; j < inst.groups[g].items.size(); ++j) {
      const auto& it = inst.groups[g].items[j];
      const Rational w = weight + it.weight;
      if (w > inst.budget) continue;
      Rational v = value + it.scalar_profit();
      for (std::size_t t = 0; t < g; ++t)
        if (pick[t]) v += inst.pair(inst.groups[t].items[*pick[t]].id, it.id);
      pick[g] = j;
      run(g + 1, v, w);
      pick[g] = std::nullopt;
    }
    if (inst.at_most_one) run(g + 1, value, weight);  // skip the group
  }
};

}  // namespace detail

/// Exhaustive search in declaration order; the first selection attaining
/// the maximal objective wins, which makes the answer the
/// lexicographically first maximizer.
inline QapSolution solve_qap_exact(const QapInstance& inst, std::size_t cap = 1'000'000) {
  inst.check();
  unsigned long long space = 1;
  for (const auto& g : inst.groups) {
    space *= g.items.size() + (inst.at_most_one ? 1 : 0);
    if (space > cap) throw limit_error("selection space exceeds the configured cap");
  }
  detail::QapSearch search(inst, cap);
  search.run(0, Rational(0), Rational(0));
  if (!search.best) throw infeasible_error("no selection fits the budget");
  return *search.best;
}

/// Sequential greedy: groups in declaration order, each time the item
/// maximizing marginal profit (linear plus pairs to already chosen items)
/// per unit weight while the remaining groups can still fit. Ties prefer
/// the larger marginal, then the smaller weight, then declaration order.
inline QapSolution solve_qap_greedy(const QapInstance& inst) {
  inst.check();
  if (!inst.at_most_one) {
    Rational floor_weight;
    for (const auto& g : inst.groups) floor_weight += detail::min_group_weight(g);
    if (floor_weight > inst.budget) throw infeasible_error("even the lightest selection exceeds the budget");
  }

  std::vector<Rational> suffix_floor(inst.groups.size() + 1);
  for (std::size_t g = inst.groups.size(); g-- > 0;) {
    const Rational mg = inst.at_most_one ? Rational(0) : detail::min_group_weight(inst.groups[g]);
    suffix_floor[g] = suffix_floor[g + 1] + mg;
  }

  QapSolution sol;
  Rational weight;
  std::vector<const McpItem*> chosen;
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    const auto& items = inst.groups[g].items;
    std::optional<std::size_t> best;
    Rational best_marginal, best_weight;
    for (std::size_t j = 0; j < items.size(); ++j) {
      const Rational w = weight + items[j].weight;
      if (w + suffix_floor[g + 1] > inst.budget) continue;
      Rational marginal = items[j].scalar_profit();
      for (const auto* c : chosen) marginal += inst.pair(c->id, items[j].id);
      bool take = false;
      if (!best) {
        take = true;
      } else if (detail::ratio_less(best_marginal, best_weight, marginal, items[j].weight)) {
        take = true;
      } else if (!detail::ratio_less(marginal, items[j].weight, best_marginal, best_weight)) {
        if (marginal > best_marginal || (marginal == best_marginal && items[j].weight < best_weight)) take = true;
      }
      if (take) {
        best = j;
        best_marginal = marginal;
        best_weight = items[j].weight;
      }
    }
    if (!best) {
      if (!inst.at_most_one) throw infeasible_error("greedy assignment cannot fit group " + inst.groups[g].id);
      continue;  // leave the group empty
    }
    weight += items[*best].weight;
    chosen.push_back(&items[*best]);
    sol.selection.emplace_back(inst.groups[g].id, items[*best].id);
  }
  sol.weight = weight;
  sol.objective = qap_objective(inst, sol.selection);
  return sol;
}

struct QapFrontierPoint {
  std::vector<std::pair<std::string, std::string>> selection;
  std::vector<Rational> objective;
  Rational weight;
};

/// Multicriteria variant: the vector objective adds the pair profits of a
/// selection to every linear component. Solved exactly by exhaustive
/// enumeration with Pareto filtering; the scalar solver per component would
/// only recover the frontier's extreme points.
inline std::vector<QapFrontierPoint> solve_qap_multicriteria(const QapInstance& inst, std::size_t cap = 1'000'000) {
  inst.check();
  std::size_t dim = inst.groups.front().items.front().profit.size();
  for (const auto& g : inst.groups)
    for (const auto& it : g.items)
      if (it.profit.size() != dim) throw validation_error("profit vectors must share one dimension");

  std::vector<QapFrontierPoint> feasible;
  std::vector<std::optional<std::size_t>> pick(inst.groups.size());
  std::size_t visited = 0;
  auto rec = [&](auto&& self, std::size_t g, Rational weight) -> void {
    if (g == inst.groups.size()) {
      if (++visited > cap) throw limit_error("selection space exceeds the configured cap");
      QapFrontierPoint p;
      p.weight = weight;
      p.objective.assign(dim, Rational(0));
      std::vector<const McpItem*> items;
      for (std::size_t t = 0; t < pick.size(); ++t)
        if (pick[t]) {
          const auto& it = inst.groups[t].items[*pick[t]];
          p.selection.emplace_back(inst.groups[t].id, it.id);
          for (std::size_t d = 0; d < dim; ++d) p.objective[d] += it.profit[d];
          items.push_back(&it);
        }
      Rational pairs;
      for (std::size_t a = 0; a < items.size(); ++a)
        for (std::size_t b = a + 1; b < items.size(); ++b) pairs += inst.pair(items[a]->id, items[b]->id);
      for (std::size_t d = 0; d < dim; ++d) p.objective[d] += pairs;
      feasible.push_back(std::move(p));
      return;
    }
    for (std::size_t j = 0; j < inst.groups[g].items.size(); ++j) {
      const Rational w = weight + inst.groups[g].items[j].weight;
      if (w > inst.budget) continue;
      pick[g] = j;
      self(self, g + 1, w);
      pick[g] = std::nullopt;
    }
    if (inst.at_most_one) self(self, g + 1, weight);
  };
  rec(rec, 0, Rational(0));
  if (feasible.empty()) throw infeasible_error("no selection fits the budget");

  std::vector<QapFrontierPoint> out;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < feasible.size() && !drop; ++j) {
      if (i == j) continue;
      bool geq = true, strict = false;
      for (std::size_t d = 0; d < dim; ++d) {
        if (feasible[j].objective[d] < feasible[i].objective[d]) geq = false;
        if (feasible[j].objective[d] > feasible[i].objective[d]) strict = true;
      }
      if (geq && strict) drop = true;
      if (geq && !strict && j < i && feasible[j].objective == feasible[i].objective &&
          feasible[j].selection == feasible[i].selection)
        drop = true;  // exact duplicates cannot arise, guard anyway
    }
    if (!drop) out.push_back(feasible[i]);
  }
  return out;
}

}  // namespace morphsynth
