#pragma once

#include <map>
#include <string>
#include <vector>

#include "morphsynth/model.hpp"

namespace morphsynth {

enum class RankingMethod { dominance_layers, weighted_outranking };

struct RankingConfig {
  RankingMethod method = RankingMethod::dominance_layers;
  Rational concordance_threshold{3, 5};  // majority rule: must exceed 1/2
  int k = 3;                             // target number of priority levels
};

namespace detail {

inline Rational directed(const Rational& v, Direction d) {
  return d == Direction::maximize ? v : -v;
}

/// Componentwise weak dominance with at least one strict improvement,
/// after direction normalization.
inline bool estimates_dominate(const Part& p, const DesignAlternative& a, const DesignAlternative& b) {
  bool strict = false;
  for (const auto& c : p.criteria) {
    const Rational va = directed(a.estimate(c.id), c.direction);
    const Rational vb = directed(b.estimate(c.id), c.direction);
    if (va < vb) return false;
    if (va > vb) strict = true;
  }
  return strict;
}

}  // namespace detail

/// Ordinal priorities (1 = best) for a part's alternatives derived from
/// their multicriteria estimates.
///
/// dominance_layers peels the non-dominated set layer by layer; it is
/// parameter-free and invariant under positive affine rescaling of any
/// criterion. weighted_outranking builds the concordance digraph (an edge
/// x -> y when the weights of criteria on which x is at least as good as y
/// reach the threshold), condenses its strongly connected components, and
/// peels source components; alternatives in one component share a priority.
///
/// Layers beyond cfg.k collapse into level k so the output always fits the
/// declared ordinal scale.
inline std::map<std::string, int> rank_alternatives(const Part& part, const RankingConfig& cfg) {
  if (cfg.k < 1) throw validation_error("ranking needs at least one priority level");
  if (!(cfg.concordance_threshold > Rational(1, 2)) || cfg.concordance_threshold > Rational(1))
    throw validation_error("concordance threshold must lie in (1/2, 1]");
  if (part.alternatives.empty()) throw validation_error("ranking an empty part");
  if (part.criteria.empty()) throw validation_error("part " + part.id + " has no criteria to rank by");
  for (const auto& a : part.alternatives)
    if (a.estimates.empty()) throw validation_error("alternative " + a.id + " lacks estimates");

  const std::size_t n = part.alternatives.size();
  std::map<std::string, int> out;

  if (cfg.method == RankingMethod::dominance_layers) {
    std::vector<bool> assigned(n, false);
    int layer = 0;
    std::size_t remaining = n;
    while (remaining > 0) {
      ++layer;
      std::vector<std::size_t> level;
      for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i]) continue;
        bool dominated = false;
        for (std::size_t j = 0; j < n && !dominated; ++j)
          if (j != i && !assigned[j] &&
              detail::estimates_dominate(part, part.alternatives[j], part.alternatives[i]))
            dominated = true;
        if (!dominated) level.push_back(i);
      }
      for (std::size_t i : level) {
        assigned[i] = true;
        out[part.alternatives[i].id] = std::min(layer, cfg.k);
      }
      remaining -= level.size();
    }
    return out;
  }

  // weighted_outranking: concordance matrix and its SCC condensation.
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Rational concordance;
      for (const auto& c : part.criteria) {
        const Rational vi = detail::directed(part.alternatives[i].estimate(c.id), c.direction);
        const Rational vj = detail::directed(part.alternatives[j].estimate(c.id), c.direction);
        if (vi >= vj) concordance += c.weight;
      }
      edge[i][j] = concordance >= cfg.concordance_threshold;
    }

  // mutual reachability via Floyd-Warshall; n is tiny
  std::vector<std::vector<bool>> reach = edge;
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (std::size_t k2 = 0; k2 < n; ++k2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k2] && reach[k2][j]) reach[i][j] = true;

  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = ncomp;
    for (std::size_t j = i + 1; j < n; ++j)
      if (comp[j] < 0 && reach[i][j] && reach[j][i]) comp[j] = ncomp;
    ++ncomp;
  }

  // peel condensation sources
  std::vector<int> layer_of(ncomp, 0);
  std::vector<bool> done(ncomp, false);
  int assigned = 0, layer = 0;
  while (assigned < ncomp) {
    ++layer;
    std::vector<int> sources;
    for (int c = 0; c < ncomp; ++c) {
      if (done[c]) continue;
      bool has_incoming = false;
      for (std::size_t i = 0; i < n && !has_incoming; ++i)
        for (std::size_t j = 0; j < n && !has_incoming; ++j)
          if (edge[i][j] && comp[j] == c && comp[i] != c && !done[comp[i]]) has_incoming = true;
      if (!has_incoming) sources.push_back(c);
    }
    if (sources.empty())  // cannot happen on a DAG, guard anyway
      for (int c = 0; c < ncomp; ++c)
        if (!done[c]) sources.push_back(c);
    for (int c : sources) {
      done[c] = true;
      layer_of[c] = layer;
      ++assigned;
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[part.alternatives[i].id] = std::min(layer_of[comp[i]], cfg.k);
  return out;
}

}  // namespace morphsynth
