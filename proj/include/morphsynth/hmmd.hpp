#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "morphsynth/enumerate.hpp"
#include "morphsynth/model.hpp"

namespace morphsynth {

/// System quality N(S) = (w; n1..nk): the minimum pairwise compatibility
/// across the composition plus the census of selected alternatives per
/// priority level (n1 counts the best level).
struct QualityVector {
  int w = 0;
  std::vector<int> census;

  int parts_counted() const { return std::accumulate(census.begin(), census.end(), 0); }

  std::string str() const {
    std::string s = "(" + std::to_string(w) + ";";
    for (std::size_t i = 0; i < census.size(); ++i) s += (i ? "," : "") + std::to_string(census[i]);
    return s + ")";
  }

  friend bool operator==(const QualityVector& a, const QualityVector& b) {
    return a.w == b.w && a.census == b.census;
  }
  friend bool operator<(const QualityVector& a, const QualityVector& b) {
    return std::tie(a.w, a.census) < std::tie(b.w, b.census);
  }
};

/// Quality of a composition: w is the minimum over declared in-scope pairs
/// (the best level when nothing is declared, e.g. a single part), the
/// census counts crisp priorities.
inline QualityVector quality_vector(const Morphology& m, const Composition& c) {
  QualityVector q;
  q.w = m.l;
  q.census.assign(m.k, 0);
  for (std::size_t i = 0; i < c.selection.size(); ++i) {
    const auto& da = m.alternative(c.selection[i].second);
    const int r = m.crisp_priority(da);
    q.census[r - 1] += 1;
    for (std::size_t j = i + 1; j < c.selection.size(); ++j)
      if (const auto* e = m.compat.find(c.selection[i].second, c.selection[j].second))
        q.w = std::min(q.w, m.crisp_level(*e));
  }
  return q;
}

/// Lattice order on quality vectors: a dominates b iff a.w >= b.w and the
/// census prefix sums of a cover those of b at every level, with at least
/// one strict inequality overall. Requires equal k and equal totals.
inline bool quality_dominates(const QualityVector& a, const QualityVector& b) {
  if (a.census.size() != b.census.size())
    throw validation_error("quality vectors with different numbers of levels");
  if (a.parts_counted() != b.parts_counted())
    throw validation_error("quality vectors over different part counts");
  if (a.w < b.w) return false;
  int pa = 0, pb = 0;
  bool strict = a.w > b.w;
  for (std::size_t t = 0; t < a.census.size(); ++t) {
    pa += a.census[t];
    pb += b.census[t];
    if (pa < pb) return false;
    if (pa > pb) strict = true;
  }
  return strict;
}

/// min on compatibility, componentwise sum on censuses. Associative and
/// commutative; the neutral element is (l; all-zero census).
inline QualityVector integrate_quality(const QualityVector& a, const QualityVector& b) {
  if (a.census.size() != b.census.size())
    throw validation_error("integrating quality vectors with different numbers of levels");
  QualityVector q;
  q.w = std::min(a.w, b.w);
  q.census.resize(a.census.size());
  for (std::size_t i = 0; i < q.census.size(); ++i) q.census[i] = a.census[i] + b.census[i];
  return q;
}

struct HmmdOptions {
  int min_w = 1;        // admissibility: compositions need w >= min_w
  bool prune = true;    // keep only Pareto-efficient children before crossing
  std::size_t cap = 1'000'000;
  int threads = 1;
};

using ScoredComposition = std::pair<Composition, QualityVector>;

namespace detail {

inline std::vector<ScoredComposition> quality_pareto(std::vector<ScoredComposition> items) {
  std::vector<ScoredComposition> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < items.size() && !dominated; ++j)
      if (j != i && quality_dominates(items[j].second, items[i].second)) dominated = true;
    if (!dominated) out.push_back(items[i]);
  }
  return out;
}

inline std::vector<ScoredComposition> admissible_scored(const Morphology& m, std::string_view scope,
                                                        const HmmdOptions& opt) {
  EnumerateOptions eo;
  eo.min_level = std::max(opt.min_w, 1);
  eo.cap = opt.cap;
  eo.threads = opt.threads;
  std::vector<ScoredComposition> out;
  for (auto& c : enumerate_admissible(m, scope, eo)) {
    QualityVector q = quality_vector(m, c);
    out.emplace_back(std::move(c), std::move(q));
  }
  return out;
}

}  // namespace detail

/// Morphological clique problem at one node: all compositions whose
/// pairwise compatibility stays at or above min_w (non-zero by default),
/// Pareto-filtered under the quality lattice. An empty admissible set is a
/// valid empty result.
inline std::vector<ScoredComposition> solve_morphological_clique(const Morphology& m, std::string_view scope,
                                                                 const HmmdOptions& opt = {}) {
  const auto& node = m.node(scope);
  if (node.is_leaf()) {
    std::vector<ScoredComposition> out;
    for (const auto& a : m.part(node.id).alternatives) {
      Composition c;
      c.scope = std::string(scope);
      c.selection.emplace_back(node.id, a.id);
      QualityVector q = quality_vector(m, c);
      out.emplace_back(std::move(c), std::move(q));
    }
    return detail::quality_pareto(std::move(out));
  }
  return detail::quality_pareto(detail::admissible_scored(m, scope, opt));
}

namespace detail {

/// Bottom-up node solutions. Leaf: each alternative as a trivial
/// composition at the best w. Internal node over leaves only: admissible
/// compositions (Pareto-filtered when pruning). Higher node: cross product
/// of child solutions with quality integration plus any declared
/// cross-child pair constraints.
inline std::vector<ScoredComposition> trivial_solutions(const Morphology& m, const SystemNode& leaf) {
  std::vector<ScoredComposition> out;
  for (const auto& a : m.part(leaf.id).alternatives) {
    Composition c;
    c.scope = leaf.id;
    c.selection.emplace_back(leaf.id, a.id);
    QualityVector q;
    q.w = m.l;
    q.census.assign(m.k, 0);
    q.census[m.crisp_priority(a) - 1] = 1;
    out.emplace_back(std::move(c), std::move(q));
  }
  return out;
}

inline std::vector<ScoredComposition> node_solutions(const Morphology& m, const SystemNode& node,
                                                     const HmmdOptions& opt) {
  if (node.is_leaf()) {
    auto out = trivial_solutions(m, node);
    return opt.prune ? quality_pareto(std::move(out)) : out;
  }

  bool all_leaves = true;
  for (const auto& c : node.children)
    if (!c.is_leaf()) all_leaves = false;
  if (all_leaves) {
    auto scored = admissible_scored(m, node.id, opt);
    return opt.prune ? quality_pareto(std::move(scored)) : scored;
  }

  std::vector<ScoredComposition> acc{{Composition{node.id, {}}, QualityVector{m.l, std::vector<int>(m.k, 0)}}};
  for (const auto& child : node.children) {
    auto child_solutions = node_solutions(m, child, opt);
    std::vector<ScoredComposition> next;
    for (const auto& [ca, qa] : acc)
      for (const auto& [cb, qb] : child_solutions) {
        QualityVector q = integrate_quality(qa, qb);
        // declared pairs across previously merged children and this child
        for (const auto& [pa2, da] : ca.selection)
          for (const auto& [pb2, db] : cb.selection)
            if (const auto* e = m.compat.find(da, db)) q.w = std::min(q.w, m.crisp_level(*e));
        if (q.w < opt.min_w) continue;
        Composition merged;
        merged.scope = node.id;
        merged.selection = ca.selection;
        merged.selection.insert(merged.selection.end(), cb.selection.begin(), cb.selection.end());
        if (next.size() >= opt.cap) throw limit_error("hierarchical cross product exceeded cap");
        next.emplace_back(std::move(merged), std::move(q));
      }
    acc = std::move(next);
  }
  return opt.prune ? quality_pareto(std::move(acc)) : acc;
}

}  // namespace detail

/// Hierarchical selection: solve each internal node bottom-up, crossing
/// children and integrating quality, keeping Pareto-efficient composites.
/// The final result is Pareto-filtered regardless of pruning, so
/// prune=false serves as the unpruned oracle: it must yield the same set
/// of efficient quality vectors.
inline std::vector<ScoredComposition> solve_hierarchical(const Morphology& m, const HmmdOptions& opt = {}) {
  if (m.root.is_leaf()) return detail::trivial_solutions(m, m.root);
  return detail::quality_pareto(detail::node_solutions(m, m.root, opt));
}

/// Report helper: admissible compositions one lattice step below the
/// frontier, i.e. dominated by a frontier vector with no admissible
/// quality vector strictly between.
inline std::vector<ScoredComposition> clique_neighborhood(const Morphology& m, std::string_view scope,
                                                          const HmmdOptions& opt = {}) {
  auto scored = detail::admissible_scored(m, scope, opt);
  auto frontier = detail::quality_pareto(scored);
  std::vector<ScoredComposition> out;
  for (const auto& item : scored) {
    bool in_frontier = false;
    for (const auto& f : frontier)
      if (f.first == item.first) in_frontier = true;
    if (in_frontier) continue;
    bool covered = false;
    for (const auto& f : frontier) {
      if (!quality_dominates(f.second, item.second)) continue;
      bool between = false;
      for (const auto& z : scored)
        if (quality_dominates(f.second, z.second) && quality_dominates(z.second, item.second)) between = true;
      if (!between) covered = true;
    }
    if (covered) out.push_back(item);
  }
  return out;
}

}  // namespace morphsynth
