#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "morphsynth/model.hpp"

namespace morphsynth {

enum class VectorKeying {
  priority,  // one component per part: the selected alternative's priority
  criteria   // flattened criteria estimates, in part order then criterion order
};

enum class IdealStrategy { best_of_alternatives, best_of_scale, expert_supplied };

enum class Metric { l2, l1, chebyshev, hamming };

struct EstimateVector {
  VectorKeying keying = VectorKeying::priority;
  std::vector<Rational> components;
};

/// Estimate vector of one composition under the chosen keying.
inline EstimateVector composition_vector(const Morphology& m, const Composition& c, VectorKeying keying) {
  EstimateVector v;
  v.keying = keying;
  for (const auto& [pid, did] : c.selection) {
    const auto& da = m.alternative(did);
    if (keying == VectorKeying::priority) {
      v.components.emplace_back(m.crisp_priority(da));
    } else {
      const auto& part = m.part(pid);
      if (part.criteria.empty())
        throw validation_error("criteria keying needs criteria on part " + part.id);
      for (const auto& crit : part.criteria) v.components.push_back(da.estimate(crit.id));
    }
  }
  return v;
}

namespace detail {

/// Parses scale bounds of the form "[a..b]" from a criterion's scale note.
inline std::optional<std::pair<Rational, Rational>> scale_bounds(const Criterion& c) {
  const auto& s = c.scale_note;
  if (s.size() < 5 || s.front() != '[' || s.back() != ']') return std::nullopt;
  const auto dots = s.find("..");
  if (dots == std::string::npos) return std::nullopt;
  try {
    return std::make_pair(Rational::parse(s.substr(1, dots - 1)),
                          Rational::parse(s.substr(dots + 2, s.size() - dots - 3)));
  } catch (const validation_error&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Ideal estimate vector for the parts under `scope`.
///
///  - best_of_alternatives: per-component best value over the part's
///    alternatives (priority keying: the least priority number).
///  - best_of_scale: the optimum of each component's scale (priority
///    keying: 1; criteria keying: requires a "[a..b]" scale note).
///  - expert_supplied: echoes the given vector after a dimension check.
inline EstimateVector generate_ideal(const Morphology& m, std::string_view scope, IdealStrategy strategy,
                                     VectorKeying keying = VectorKeying::priority,
                                     const std::optional<std::vector<Rational>>& expert = std::nullopt) {
  const auto parts = m.parts_under(scope);
  EstimateVector v;
  v.keying = keying;

  std::size_t dim = 0;
  for (const auto* p : parts) dim += keying == VectorKeying::priority ? 1 : p->criteria.size();

  if (strategy == IdealStrategy::expert_supplied) {
    if (!expert) throw validation_error("expert_supplied strategy needs a vector");
    if (expert->size() != dim)
      throw validation_error("expert vector has dimension " + std::to_string(expert->size()) + ", expected " +
                             std::to_string(dim));
    v.components = *expert;
    return v;
  }

  for (const auto* p : parts) {
    if (keying == VectorKeying::priority) {
      if (strategy == IdealStrategy::best_of_scale) {
        v.components.emplace_back(1);
        continue;
      }
      if (p->alternatives.empty()) throw validation_error("part " + p->id + " has no alternatives");
      int best = m.k + 1;
      for (const auto& a : p->alternatives) best = std::min(best, m.crisp_priority(a));
      v.components.emplace_back(best);
    } else {
      if (p->criteria.empty()) throw validation_error("criteria keying needs criteria on part " + p->id);
      for (const auto& crit : p->criteria) {
        if (strategy == IdealStrategy::best_of_scale) {
          const auto bounds = detail::scale_bounds(crit);
          if (!bounds)
            throw validation_error("criterion " + crit.id + " declares no [a..b] scale for best_of_scale");
          v.components.push_back(crit.direction == Direction::maximize ? bounds->second : bounds->first);
        } else {
          bool first = true;
          Rational best;
          for (const auto& a : p->alternatives) {
            const auto& e = a.estimate(crit.id);
            if (first || (crit.direction == Direction::maximize ? e > best : e < best)) best = e;
            first = false;
          }
          v.components.push_back(best);
        }
      }
    }
  }
  return v;
}

/// Distance between two estimate vectors of equal keying and dimension.
/// Nonnegative; zero iff equal for l2/l1/chebyshev.
inline double proximity(const EstimateVector& a, const EstimateVector& b, Metric metric) {
  if (a.keying != b.keying || a.components.size() != b.components.size())
    throw validation_error("proximity over mismatched vectors");
  switch (metric) {
    case Metric::l2: {
      Rational sq;
      for (std::size_t i = 0; i < a.components.size(); ++i) {
        const Rational d = a.components[i] - b.components[i];
        sq += d * d;
      }
      return std::sqrt(sq.to_double());
    }
    case Metric::l1: {
      Rational s;
      for (std::size_t i = 0; i < a.components.size(); ++i) s += (a.components[i] - b.components[i]).abs();
      return s.to_double();
    }
    case Metric::chebyshev: {
      Rational best;
      for (std::size_t i = 0; i < a.components.size(); ++i) {
        const Rational d = (a.components[i] - b.components[i]).abs();
        if (d > best) best = d;
      }
      return best.to_double();
    }
    case Metric::hamming: {
      std::size_t n = 0;
      for (std::size_t i = 0; i < a.components.size(); ++i)
        if (a.components[i] != b.components[i]) ++n;
      return static_cast<double>(n);
    }
  }
  throw validation_error("unknown metric");
}

struct RankedCandidate {
  Composition composition;
  EstimateVector vector;
  double rho = 0.0;
  bool tied = false;  // shares its distance with another candidate
};

/// Candidates ordered by ascending proximity to the ideal; ties keep input
/// order and are flagged.
inline std::vector<RankedCandidate> select_closest(const std::vector<Composition>& candidates, const Morphology& m,
                                                   const EstimateVector& ideal, Metric metric) {
  if (candidates.empty()) throw validation_error("select_closest over an empty candidate set");
  std::vector<RankedCandidate> rows;
  rows.reserve(candidates.size());
  for (const auto& c : candidates) {
    RankedCandidate r;
    r.composition = c;
    r.vector = composition_vector(m, c, ideal.keying);
    r.rho = proximity(r.vector, ideal, metric);
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    return a.rho < b.rho;
  });
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].tied = (i > 0 && rows[i - 1].rho == rows[i].rho) || (i + 1 < rows.size() && rows[i + 1].rho == rows[i].rho);
  return rows;
}

}  // namespace morphsynth
