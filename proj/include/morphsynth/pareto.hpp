#pragma once

#include <span>
#include <string>
#include <vector>

#include "morphsynth/errors.hpp"
#include "morphsynth/rational.hpp"
#include "morphsynth/model.hpp"

namespace morphsynth {

/// Strict vector dominance: a is at least as good as b on every component
/// and strictly better on at least one. Irreflexive by construction.
inline bool dominates(std::span<const Rational> a, std::span<const Rational> b,
                      std::span<const Direction> directions) {
  if (a.size() != b.size() || a.size() != directions.size())
    throw validation_error("dominance over mismatched dimensions");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool a_better = directions[i] == Direction::maximize ? a[i] > b[i] : a[i] < b[i];
    const bool b_better = directions[i] == Direction::maximize ? b[i] > a[i] : b[i] < a[i];
    if (b_better) return false;
    if (a_better) strict = true;
  }
  return strict;
}

/// Indices of the non-dominated rows, input order preserved. Equal copies
/// of a surviving vector all survive (strict dominance never relates them).
/// Plain O(n^2) pairwise scan; n stays small at desk scale and exactness
/// is the contract.
inline std::vector<std::size_t> pareto_filter_indices(const std::vector<std::vector<Rational>>& items,
                                                      const std::vector<Direction>& directions) {
  if (items.empty()) throw validation_error("pareto filter over empty input");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < items.size() && !dominated; ++j)
      if (j != i && dominates(items[j], items[i], directions)) dominated = true;
    if (!dominated) out.push_back(i);
  }
  return out;
}

/// Sort-based fast path for 2 components. Must agree with the scan.
inline std::vector<std::size_t> pareto_filter_indices_2d(const std::vector<std::vector<Rational>>& items,
                                                         const std::vector<Direction>& directions) {
  if (items.empty()) throw validation_error("pareto filter over empty input");
  if (directions.size() != 2) throw validation_error("2d filter needs exactly two directions");
  auto key = [&](std::size_t i, int c) {
    const auto& v = items[i].at(c);
    return directions[c] == Direction::maximize ? -v : v;  // ascending = best first
  };
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key(a, 0) != key(b, 0)) return key(a, 0) < key(b, 0);
    return key(a, 1) < key(b, 1);
  });
  // Sweep: a row is dominated iff some strictly-better-on-first row is at
  // least as good on the second, or an equal-on-first row is strictly
  // better on the second with first strictly better... strictness needs
  // care, so track the best second component over strictly-better prefixes
  // and over equal-first groups separately.
  std::vector<bool> keep(items.size(), true);
  std::size_t i = 0;
  bool have_best = false;
  Rational best_second;  // minimal key(.,1) over rows with strictly smaller key(.,0)
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && key(order[j], 0) == key(order[i], 0)) ++j;
    Rational group_min = key(order[i], 1);
    for (std::size_t t = i; t < j; ++t) {
      const Rational second = key(order[t], 1);
      if (second < group_min) group_min = second;
      // dominated by a strictly-better-first row that is >= on second
      if (have_best && best_second <= second) keep[order[t]] = false;
    }
    for (std::size_t t = i; t < j; ++t) {
      // equal first component: dominated only when strictly worse second
      if (group_min < key(order[t], 1)) keep[order[t]] = false;
    }
    if (!have_best || group_min < best_second) {
      best_second = group_min;
      have_best = true;
    }
    i = j;
  }
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < items.size(); ++t)
    if (keep[t]) out.push_back(t);
  return out;
}

/// Id-based wrapper over the index filter.
inline std::vector<std::string> pareto_filter(const std::vector<std::pair<std::string, std::vector<Rational>>>& items,
                                              const std::vector<Direction>& directions) {
  std::vector<std::vector<Rational>> vecs;
  vecs.reserve(items.size());
  for (const auto& [id, v] : items) vecs.push_back(v);
  std::vector<std::string> out;
  for (std::size_t i : pareto_filter_indices(vecs, directions)) out.push_back(items[i].first);
  return out;
}

}  // namespace morphsynth
