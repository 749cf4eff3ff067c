#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "morphsynth/instance_io.hpp"
#include "morphsynth/model.hpp"

namespace morphsynth {

struct McpItem {
  std::string id;
  std::vector<Rational> profit;  // one entry for the scalar problem
  Rational weight;

  const Rational& scalar_profit() const {
    if (profit.size() != 1) throw validation_error("item " + id + " carries a profit vector, not a scalar");
    return profit.front();
  }
};

struct McpGroup {
  std::string id;
  std::vector<McpItem> items;
};

/// Multiple choice knapsack: exactly one item per group under one shared
/// budget.
struct McpInstance {
  std::vector<McpGroup> groups;
  Rational budget;

  void check() const {
    if (groups.empty()) throw validation_error("multiple choice instance without groups");
    for (const auto& g : groups) {
      if (g.items.empty()) throw validation_error("group " + g.id + " is empty");
      for (const auto& it : g.items)
        if (it.weight < Rational(0)) throw validation_error("negative weight on item " + it.id);
    }
  }
};

struct McpSolution {
  std::vector<std::pair<std::string, std::string>> selection;  // (group, item)
  Rational profit;
  Rational weight;
};

/// Instance derivation from a ranked morphology: profit (k+1) - r (the
/// worked scale has k = 3, so profit is 4 - r) and resource base - z where
/// z is the designated resource criterion's estimate; parts with an
/// override take the literal value instead.
inline McpInstance derive_mcp_instance(const Morphology& m, const McpConfig& cfg, Rational budget) {
  McpInstance inst;
  inst.budget = budget;
  for (const auto& p : m.parts) {
    McpGroup g;
    g.id = p.id;
    const auto rc = cfg.resource.find(p.id);
    for (const auto& a : p.alternatives) {
      McpItem item;
      item.id = a.id;
      item.profit.emplace_back(Rational(m.k + 1) - Rational(m.crisp_priority(a)));
      if (rc == cfg.resource.end())
        throw validation_error("no resource rule declared for part " + p.id);
      const auto& rule = rc->second;
      if (rule.override_all) {
        item.weight = *rule.override_all;
      } else if (!rule.override_per_da.empty()) {
        const auto it = rule.override_per_da.find(a.id);
        if (it == rule.override_per_da.end())
          throw validation_error("resource override misses alternative " + a.id);
        item.weight = it->second;
      } else if (!rule.criterion.empty()) {
        item.weight = cfg.resource_base - a.estimate(rule.criterion);
      } else {
        throw validation_error("resource rule for part " + p.id + " names neither criterion nor override");
      }
      g.items.push_back(std::move(item));
    }
    inst.groups.push_back(std::move(g));
  }
  return inst;
}

namespace detail {

inline Rational min_group_weight(const McpGroup& g) {
  Rational best = g.items.front().weight;
  for (const auto& it : g.items)
    if (it.weight < best) best = it.weight;
  return best;
}

inline void require_feasible(const McpInstance& inst) {
  Rational floor_weight;
  for (const auto& g : inst.groups) floor_weight += min_group_weight(g);
  if (floor_weight > inst.budget)
    throw infeasible_error("even the lightest selection weighs " + floor_weight.str() + " against budget " +
                           inst.budget.str());
}

/// Ratio comparison c1/a1 > c2/a2 by cross multiplication; zero weights
/// sort as infinite ratio, larger profit first.
inline bool ratio_less(const Rational& c1, const Rational& a1, const Rational& c2, const Rational& a2) {
  const bool z1 = a1 == Rational(0), z2 = a2 == Rational(0);
  if (z1 || z2) {
    if (z1 && z2) return c1 < c2;
    return z2;  // finite < infinite
  }
  return c1 * a2 < c2 * a1;
}

}  // namespace detail

/// Ratio-start greedy with budget repair.
///
/// Start: each group's best profit-per-weight item (ties: larger profit,
/// then smaller weight, then declaration order). Repair while over budget:
/// among lighter replacements that restore feasibility pick the one losing
/// the least profit, then freeing the least weight, preferring later
/// groups and earlier items on exact ties; when none restores feasibility
/// in one step, the swap freeing the most weight is applied and repair
/// continues. A final pass applies profit-raising swaps that fit the
/// remaining budget, best profit-per-added-weight first.
inline McpSolution solve_mcp_greedy(const McpInstance& inst) {
  inst.check();
  detail::require_feasible(inst);

  const std::size_t n = inst.groups.size();
  std::vector<std::size_t> pick(n, 0);
  for (std::size_t gi = 0; gi < n; ++gi) {
    const auto& items = inst.groups[gi].items;
    std::size_t best = 0;
    for (std::size_t j = 1; j < items.size(); ++j) {
      const auto& cand = items[j];
      const auto& cur = items[best];
      if (detail::ratio_less(cur.scalar_profit(), cur.weight, cand.scalar_profit(), cand.weight)) {
        best = j;
      } else if (!detail::ratio_less(cand.scalar_profit(), cand.weight, cur.scalar_profit(), cur.weight)) {
        if (cand.scalar_profit() > cur.scalar_profit() ||
            (cand.scalar_profit() == cur.scalar_profit() && cand.weight < cur.weight))
          best = j;
      }
    }
    pick[gi] = best;
  }

  auto total = [&] {
    Rational c, a;
    for (std::size_t gi = 0; gi < n; ++gi) {
      c += inst.groups[gi].items[pick[gi]].scalar_profit();
      a += inst.groups[gi].items[pick[gi]].weight;
    }
    return std::pair<Rational, Rational>(c, a);
  };

  // repair
  while (true) {
    auto [profit, weight] = total();
    if (weight <= inst.budget) break;
    struct Swap {
      std::size_t group, item;
      Rational dprofit, dweight;  // dweight < 0
      bool restores;
    };
    std::optional<Swap> chosen;
    auto better = [&](const Swap& s, const Swap& t) {
      if (s.restores != t.restores) return s.restores;
      if (s.restores) {
        if (s.dprofit != t.dprofit) return s.dprofit > t.dprofit;      // lose least profit
        if (s.dweight != t.dweight) return s.dweight > t.dweight;     // free least weight
        if (s.group != t.group) return s.group > t.group;             // later group first
        return s.item < t.item;
      }
      if (s.dweight != t.dweight) return s.dweight < t.dweight;       // free most weight
      if (s.dprofit != t.dprofit) return s.dprofit > t.dprofit;
      if (s.group != t.group) return s.group > t.group;
      return s.item < t.item;
    };
    for (std::size_t gi = 0; gi < n; ++gi) {
      const auto& items = inst.groups[gi].items;
      const auto& cur = items[pick[gi]];
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (j == pick[gi] || !(items[j].weight < cur.weight)) continue;
        Swap s{gi, j, items[j].scalar_profit() - cur.scalar_profit(), items[j].weight - cur.weight, false};
        s.restores = weight + s.dweight <= inst.budget;
        if (!chosen || better(s, *chosen)) chosen = s;
      }
    }
    if (!chosen) throw infeasible_error("greedy repair ran out of lighter replacements");
    pick[chosen->group] = chosen->item;
  }

  // improvement
  while (true) {
    auto [profit, weight] = total();
    struct Swap {
      std::size_t group, item;
      Rational dprofit, dweight;
    };
    std::optional<Swap> chosen;
    auto better = [&](const Swap& s, const Swap& t) {
      // higher gained profit per added weight, then more profit, then less
      // added weight, then earlier group and item
      if (detail::ratio_less(t.dprofit, t.dweight.abs(), s.dprofit, s.dweight.abs())) return true;
      if (detail::ratio_less(s.dprofit, s.dweight.abs(), t.dprofit, t.dweight.abs())) return false;
      if (s.dprofit != t.dprofit) return s.dprofit > t.dprofit;
      if (s.dweight != t.dweight) return s.dweight < t.dweight;
      if (s.group != t.group) return s.group < t.group;
      return s.item < t.item;
    };
    for (std::size_t gi = 0; gi < n; ++gi) {
      const auto& items = inst.groups[gi].items;
      const auto& cur = items[pick[gi]];
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (j == pick[gi]) continue;
        const Rational dprofit = items[j].scalar_profit() - cur.scalar_profit();
        const Rational dweight = items[j].weight - cur.weight;
        if (!(dprofit > Rational(0)) || weight + dweight > inst.budget) continue;
        Swap s{gi, j, dprofit, dweight};
        if (!chosen || better(s, *chosen)) chosen = s;
      }
    }
    if (!chosen) break;
    pick[chosen->group] = chosen->item;
  }

  McpSolution sol;
  auto [profit, weight] = total();
  sol.profit = profit;
  sol.weight = weight;
  for (std::size_t gi = 0; gi < n; ++gi)
    sol.selection.emplace_back(inst.groups[gi].id, inst.groups[gi].items[pick[gi]].id);
  return sol;
}

namespace detail {

/// Common scaling grid: least common multiple of all weight denominators.
inline std::int64_t weight_lcd(const McpInstance& inst) {
  std::int64_t lcd = inst.budget.den();
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) {
      const std::int64_t d = it.weight.den();
      lcd = std::lcm(lcd, d);
      if (lcd > 100'000'000) throw limit_error("weight grid denominator too fine for the dynamic program");
    }
  return lcd;
}

}  // namespace detail

/// Exact dynamic program over the weight grid. Among profit-optimal
/// selections it returns the lightest; among those, the lexicographically
/// first by declaration order.
inline McpSolution solve_mcp_exact(const McpInstance& inst, std::size_t cell_cap = 10'000'000) {
  inst.check();
  detail::require_feasible(inst);

  const std::int64_t lcd = detail::weight_lcd(inst);
  const auto scaled = [&](const Rational& w) { return w.num() * (lcd / w.den()); };
  std::int64_t budget = scaled(inst.budget);
  // capacities above the total weight are equivalent to the total weight
  std::int64_t total_max = 0;
  for (const auto& g : inst.groups) {
    std::int64_t gmax = 0;
    for (const auto& it : g.items) gmax = std::max(gmax, scaled(it.weight));
    total_max += gmax;
  }
  budget = std::min(budget, total_max);
  const std::size_t w_dim = static_cast<std::size_t>(budget) + 1;
  const std::size_t n = inst.groups.size();
  if (w_dim * (n + 1) > cell_cap)
    throw limit_error("dynamic program would need " + std::to_string(w_dim * (n + 1)) + " cells");

  struct Cell {
    Rational profit;
    std::int64_t weight = -1;  // min achievable weight for this profit; -1 = unreachable
  };
  // suffix[g][w]: best (profit desc, weight asc) using groups g.. with capacity w
  std::vector<std::vector<Cell>> suffix(n + 1, std::vector<Cell>(w_dim));
  for (std::size_t w = 0; w < w_dim; ++w) suffix[n][w] = Cell{Rational(0), 0};
  for (std::size_t g = n; g-- > 0;) {
    for (std::size_t w = 0; w < w_dim; ++w) {
      Cell best;
      for (const auto& it : inst.groups[g].items) {
        const std::int64_t iw = scaled(it.weight);
        if (iw > static_cast<std::int64_t>(w)) continue;
        const Cell& rest = suffix[g + 1][w - iw];
        if (rest.weight < 0) continue;
        Cell cand{rest.profit + it.scalar_profit(), rest.weight + iw};
        if (best.weight < 0 || cand.profit > best.profit ||
            (cand.profit == best.profit && cand.weight < best.weight))
          best = cand;
      }
      suffix[g][w] = best;
    }
  }
  if (suffix[0][w_dim - 1].weight < 0) throw infeasible_error("no selection fits the budget");

  McpSolution sol;
  std::int64_t w = budget;
  for (std::size_t g = 0; g < n; ++g) {
    const Cell target = suffix[g][w];
    bool placed = false;
    for (const auto& it : inst.groups[g].items) {  // declaration order => lexicographically first
      const std::int64_t iw = scaled(it.weight);
      if (iw > w) continue;
      const Cell& rest = suffix[g + 1][w - iw];
      if (rest.weight < 0) continue;
      if (rest.profit + it.scalar_profit() == target.profit && rest.weight + iw == target.weight) {
        sol.selection.emplace_back(inst.groups[g].id, it.id);
        sol.profit += it.scalar_profit();
        w -= iw;
        placed = true;
        break;
      }
    }
    if (!placed) throw validation_error("dynamic program reconstruction failed");  // unreachable
  }
  Rational total_weight;
  for (std::size_t g = 0; g < n; ++g) {
    const auto& items = inst.groups[g].items;
    for (const auto& it : items)
      if (it.id == sol.selection[g].second) total_weight += it.weight;
  }
  sol.weight = total_weight;
  return sol;
}

struct McpFrontierPoint {
  std::vector<std::pair<std::string, std::string>> selection;
  std::vector<Rational> profit;
  Rational weight;

  friend bool operator==(const McpFrontierPoint& a, const McpFrontierPoint& b) {
    return a.selection == b.selection && a.profit == b.profit && a.weight == b.weight;
  }
};

/// Exact Pareto frontier of the multicriteria formulation via a label
/// dynamic program: per group prefix, keep the (weight, profit-vector)
/// labels not dominated by a lighter-or-equal label with a
/// componentwise-better vector.
inline std::vector<McpFrontierPoint> solve_mcp_multicriteria(const McpInstance& inst,
                                                             std::size_t label_cap = 1'000'000) {
  inst.check();
  detail::require_feasible(inst);
  std::size_t dim = inst.groups.front().items.front().profit.size();
  for (const auto& g : inst.groups)
    for (const auto& it : g.items)
      if (it.profit.size() != dim) throw validation_error("profit vectors must share one dimension");

  struct Label {
    Rational weight;
    std::vector<Rational> profit;
    std::vector<std::size_t> picks;
  };
  auto label_dominates = [&](const Label& a, const Label& b) {
    if (a.weight > b.weight) return false;
    bool strict = a.weight < b.weight;
    for (std::size_t i = 0; i < dim; ++i) {
      if (a.profit[i] < b.profit[i]) return false;
      if (a.profit[i] > b.profit[i]) strict = true;
    }
    return strict;
  };

  std::vector<Label> labels{{Rational(0), std::vector<Rational>(dim), {}}};
  for (const auto& g : inst.groups) {
    std::vector<Label> next;
    for (const auto& lab : labels) {
      for (std::size_t j = 0; j < g.items.size(); ++j) {
        const auto& it = g.items[j];
        Label ext;
        ext.weight = lab.weight + it.weight;
        if (ext.weight > inst.budget) continue;
        ext.profit = lab.profit;
        for (std::size_t d = 0; d < dim; ++d) ext.profit[d] += it.profit[d];
        ext.picks = lab.picks;
        ext.picks.push_back(j);
        next.push_back(std::move(ext));
      }
    }
    if (next.empty()) throw infeasible_error("no selection fits the budget");
    // prune dominated labels; identical (weight, profit) keep the first,
    // which is the lexicographically least pick sequence
    std::vector<bool> drop(next.size(), false);
    for (std::size_t i = 0; i < next.size(); ++i)
      for (std::size_t j = 0; j < next.size() && !drop[i]; ++j) {
        if (i == j) continue;
        if (label_dominates(next[j], next[i])) drop[i] = true;
        if (next[j].weight == next[i].weight && next[j].profit == next[i].profit && j < i) drop[i] = true;
      }
    std::vector<Label> pruned;
    for (std::size_t i = 0; i < next.size(); ++i)
      if (!drop[i]) pruned.push_back(std::move(next[i]));
    if (pruned.size() > label_cap) throw limit_error("label count exceeded cap");
    labels = std::move(pruned);
  }

  // final frontier over profit vectors only (weight already feasible)
  std::vector<McpFrontierPoint> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < labels.size() && !drop; ++j) {
      if (i == j) continue;
      bool geq = true, strict = false;
      for (std::size_t d = 0; d < dim; ++d) {
        if (labels[j].profit[d] < labels[i].profit[d]) geq = false;
        if (labels[j].profit[d] > labels[i].profit[d]) strict = true;
      }
      if (geq && strict) drop = true;
      if (geq && !strict && labels[j].profit == labels[i].profit) {
        // equal vectors: keep the lighter, then the earlier pick sequence
        if (labels[j].weight < labels[i].weight) drop = true;
        if (labels[j].weight == labels[i].weight && labels[j].picks < labels[i].picks) drop = true;
      }
    }
    if (drop) continue;
    McpFrontierPoint p;
    p.weight = labels[i].weight;
    p.profit = labels[i].profit;
    for (std::size_t g = 0; g < inst.groups.size(); ++g)
      p.selection.emplace_back(inst.groups[g].id, inst.groups[g].items[labels[i].picks[g]].id);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const McpFrontierPoint& a, const McpFrontierPoint& b) {
    return a.selection < b.selection;
  });
  return out;
}

}  // namespace morphsynth
