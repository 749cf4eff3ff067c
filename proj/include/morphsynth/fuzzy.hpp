#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "morphsynth/enumerate.hpp"
#include "morphsynth/hmmd.hpp"
#include "morphsynth/model.hpp"

namespace morphsynth {

/// Membership distribution over priority levels 1..k (index 0 <-> r = 1).
struct FuzzyPriority {
  std::vector<double> memberships;
};

/// Membership distribution over compatibility levels printed best to
/// worst: index 0 <-> level l, last index <-> level 0.
struct FuzzyCompatibility {
  std::vector<double> memberships;
};

/// Aggregated priority: argmax membership; ties fall to the worse (larger)
/// priority level.
inline int aggregate_priority(const FuzzyPriority& f) {
  int best = -1;
  double mu = 0.0;
  for (int r = 1; r <= static_cast<int>(f.memberships.size()); ++r) {
    const double v = f.memberships[r - 1];
    if (v > 0.0 && v >= mu) {
      mu = v;
      best = r;
    }
  }
  if (best < 0) throw validation_error("all-zero fuzzy priority");
  return best;
}

/// Aggregated compatibility: argmax membership over levels l..0; ties fall
/// to the lower (worse) level.
inline int aggregate_compatibility(const FuzzyCompatibility& f) {
  const int l = static_cast<int>(f.memberships.size()) - 1;
  int best = -1;
  double mu = 0.0;
  for (int i = 0; i <= l; ++i) {  // best-to-worst scan, >= lets later (lower) levels win ties
    const double v = f.memberships[i];
    if (v > 0.0 && v >= mu) {
      mu = v;
      best = l - i;
    }
  }
  if (best < 0) throw validation_error("all-zero fuzzy compatibility");
  return best;
}

struct SupportPoint {
  QualityVector quality;
  double membership = 0.0;
};

enum class PreferenceRule { maxmem, pessimistic };

struct FuzzyOptions {
  double alpha = 0.0;  // support points below this membership are cut
  int min_w = 1;
  PreferenceRule preference = PreferenceRule::maxmem;
  bool aggregate_priorities = false;     // treat DA estimates as crisp argmax values
  bool aggregate_compatibilities = false;  // treat pair estimates as crisp argmax values
};

namespace detail {

/// (level, membership) pairs with positive membership, in a deterministic
/// worst-to-best level order.
struct LevelDist {
  std::vector<std::pair<int, double>> support;
};

inline LevelDist priority_dist(const Morphology& m, const DesignAlternative& da, bool aggregated) {
  LevelDist d;
  if (aggregated || da.fuzzy_priority.empty()) {
    d.support.emplace_back(m.crisp_priority(da), 1.0);
    return d;
  }
  for (int r = static_cast<int>(da.fuzzy_priority.size()); r >= 1; --r)
    if (da.fuzzy_priority[r - 1] > 0.0) d.support.emplace_back(r, da.fuzzy_priority[r - 1]);
  if (d.support.empty()) throw validation_error("alternative " + da.id + " has all-zero fuzzy priority");
  return d;
}

inline LevelDist compat_dist(const Morphology& m, const CompatibilityEntry& e, bool aggregated) {
  LevelDist d;
  if (aggregated || !e.is_fuzzy()) {
    d.support.emplace_back(m.crisp_level(e), 1.0);
    return d;
  }
  const int l = static_cast<int>(e.fuzzy.size()) - 1;
  for (int i = l; i >= 0; --i)  // worst-to-best: index l holds level 0
    if (e.fuzzy[i] > 0.0) d.support.emplace_back(l - i, e.fuzzy[i]);
  if (d.support.empty()) throw validation_error("all-zero fuzzy compatibility entry");
  return d;
}

}  // namespace detail

/// Support set of a composition's quality vector under fuzzy estimates.
///
/// Every joint assignment of crisp levels with positive membership yields
/// one realization; its membership is the minimum of the constituent
/// memberships and identical quality vectors combine by maximum. Points
/// with membership below alpha are cut. Crisp constituents act as
/// membership-one singletons, so the all-crisp case collapses to the
/// deterministic quality vector at membership 1.
inline std::vector<SupportPoint> quality_support(const Morphology& m, const Composition& c, double alpha = 0.0,
                                                 bool aggregate_priorities = false,
                                                 bool aggregate_compatibilities = false) {
  std::vector<detail::LevelDist> prio_dists;   // one per selected alternative
  std::vector<detail::LevelDist> pair_dists;   // one per declared in-scope pair
  for (const auto& [pid, did] : c.selection)
    prio_dists.push_back(detail::priority_dist(m, m.alternative(did), aggregate_priorities));
  for (std::size_t i = 0; i < c.selection.size(); ++i)
    for (std::size_t j = i + 1; j < c.selection.size(); ++j)
      if (const auto* e = m.compat.find(c.selection[i].second, c.selection[j].second))
        pair_dists.push_back(detail::compat_dist(m, *e, aggregate_compatibilities));

  std::map<std::pair<int, std::vector<int>>, double> combined;  // (w, census) -> max membership
  std::vector<std::size_t> idx(prio_dists.size() + pair_dists.size(), 0);
  const auto dist_at = [&](std::size_t t) -> const detail::LevelDist& {
    return t < prio_dists.size() ? prio_dists[t] : pair_dists[t - prio_dists.size()];
  };
  while (true) {
    double mu = 1.0;
    int w = m.l;
    std::vector<int> census(m.k, 0);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const auto& [level, membership] = dist_at(t).support[idx[t]];
      mu = std::min(mu, membership);
      if (t < prio_dists.size())
        census[level - 1] += 1;
      else
        w = std::min(w, level);
    }
    auto key = std::make_pair(w, std::move(census));
    auto it = combined.find(key);
    if (it == combined.end())
      combined.emplace(std::move(key), mu);
    else
      it->second = std::max(it->second, mu);

    std::size_t t = 0;
    while (t < idx.size() && ++idx[t] == dist_at(t).support.size()) idx[t++] = 0;
    if (t == idx.size()) break;
  }

  std::vector<SupportPoint> out;
  for (const auto& [key, mu] : combined)
    if (mu >= alpha && mu > 0.0) out.push_back({QualityVector{key.first, key.second}, mu});
  if (out.empty()) throw validation_error("empty support after alpha cut at " + std::to_string(alpha));
  // best-first: higher w, then lattice-higher census by prefix sums
  std::sort(out.begin(), out.end(), [](const SupportPoint& a, const SupportPoint& b) {
    if (a.quality.w != b.quality.w) return a.quality.w > b.quality.w;
    int pa = 0, pb = 0;
    for (std::size_t i = 0; i < a.quality.census.size(); ++i) {
      pa += a.quality.census[i];
      pb += b.quality.census[i];
      if (pa != pb) return pa > pb;
    }
    return false;
  });
  return out;
}

struct FuzzyDecision {
  Composition composition;
  std::vector<SupportPoint> support;
};

namespace detail {

inline const SupportPoint& pessimistic_point(const std::vector<SupportPoint>& s) {
  return s.back();  // support is sorted best-first
}

/// The maximal-membership point; membership ties fall to the pessimistic
/// (lattice-lower) candidate so that normalized inputs reproduce the
/// aggregated crisp quality vector.
inline const SupportPoint& maxmem_point(const std::vector<SupportPoint>& s) {
  double best = 0.0;
  for (const auto& p : s) best = std::max(best, p.membership);
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    if (it->membership == best) return *it;
  return s.front();
}

inline bool preferred(const FuzzyDecision& a, const FuzzyDecision& b, PreferenceRule rule) {
  const QualityVector& ma = maxmem_point(a.support).quality;
  const QualityVector& mb = maxmem_point(b.support).quality;
  const QualityVector& pa = pessimistic_point(a.support).quality;
  const QualityVector& pb = pessimistic_point(b.support).quality;
  const QualityVector& first_a = rule == PreferenceRule::maxmem ? ma : pa;
  const QualityVector& first_b = rule == PreferenceRule::maxmem ? mb : pb;
  const QualityVector& tie_a = rule == PreferenceRule::maxmem ? pa : ma;
  const QualityVector& tie_b = rule == PreferenceRule::maxmem ? pb : mb;
  if (quality_dominates(first_a, first_b)) return true;
  if (first_a == first_b && quality_dominates(tie_a, tie_b)) return true;
  return false;
}

}  // namespace detail

/// HMMD under fuzzy estimates. The case selects which estimates are
/// aggregated to crisp values before solving:
///   1 - both (deterministic HMMD over aggregated estimates),
///   2 - priorities only (compatibility stays fuzzy),
///   3 - compatibilities only (priorities stay fuzzy),
///   4 - neither.
/// Feasibility asks the pessimistic compatibility realization to stay at
/// or above min_w; the survivors are then filtered under the configured
/// preference rule.
inline std::vector<FuzzyDecision> solve_fuzzy(const Morphology& m, int fuzzy_case, const FuzzyOptions& opt = {}) {
  if (fuzzy_case < 1 || fuzzy_case > 4) throw validation_error("fuzzy case must lie in 1..4");
  const bool agg_prio = fuzzy_case == 1 || fuzzy_case == 2;
  const bool agg_comp = fuzzy_case == 1 || fuzzy_case == 3;

  // Pessimistic admissibility: every declared pair must keep its lowest
  // positive-membership level (or aggregated level) at or above min_w.
  // enumerate_admissible prunes on crisp (aggregated) levels, which is
  // optimistic relative to the pessimistic rule, so re-check below.
  EnumerateOptions eo;
  eo.min_level = 1;
  std::vector<FuzzyDecision> out;
  for (const auto& c : enumerate_admissible(m, m.root.id, eo)) {
    bool feasible = true;
    for (std::size_t i = 0; i < c.selection.size() && feasible; ++i)
      for (std::size_t j = i + 1; j < c.selection.size() && feasible; ++j)
        if (const auto* e = m.compat.find(c.selection[i].second, c.selection[j].second)) {
          const auto dist = detail::compat_dist(m, *e, agg_comp);
          int wmin = m.l;
          for (const auto& [level, mu] : dist.support) wmin = std::min(wmin, level);
          if (wmin < opt.min_w) feasible = false;
        }
    if (!feasible) continue;
    FuzzyDecision d;
    d.composition = c;
    d.support = quality_support(m, c, opt.alpha, agg_prio, agg_comp);
    out.push_back(std::move(d));
  }

  std::vector<FuzzyDecision> kept;
  for (const auto& x : out) {
    bool beaten = false;
    for (const auto& y : out)
      if (&x != &y && detail::preferred(y, x, opt.preference)) beaten = true;
    if (!beaten) kept.push_back(x);
  }
  return kept;
}

}  // namespace morphsynth
