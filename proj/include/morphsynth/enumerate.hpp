#pragma once

#include <future>
#include <string>
#include <string_view>
#include <vector>

#include "morphsynth/model.hpp"

namespace morphsynth {

struct EnumerateOptions {
  int min_level = 1;
  std::size_t cap = 1'000'000;  // emitted compositions; exceeded -> limit_error
  int threads = 1;
};

namespace detail {

/// Depth-first walk over parts with incremental pairwise pruning: a branch
/// dies on the first chosen pair whose declared level falls below the
/// threshold. Pairs without a declared entry never constrain.
inline void enumerate_rec(const Morphology& m, const std::vector<const Part*>& parts, std::size_t depth,
                          std::vector<std::size_t>& picked, std::vector<Composition>& out,
                          std::string_view scope, int min_level, std::size_t cap) {
  if (depth == parts.size()) {
    if (out.size() >= cap) throw limit_error("enumeration cap of " + std::to_string(cap) + " compositions exceeded");
    Composition c;
    c.scope = std::string(scope);
    c.selection.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.selection.emplace_back(parts[i]->id, parts[i]->alternatives[picked[i]].id);
    out.push_back(std::move(c));
    return;
  }
  for (std::size_t j = 0; j < parts[depth]->alternatives.size(); ++j) {
    const auto& cand = parts[depth]->alternatives[j];
    bool ok = true;
    for (std::size_t i = 0; i < depth && ok; ++i) {
      const auto& prev = parts[i]->alternatives[picked[i]];
      if (const auto* e = m.compat.find(prev.id, cand.id))
        if (m.crisp_level(*e) < min_level) ok = false;
    }
    if (!ok) continue;
    picked.push_back(j);
    enumerate_rec(m, parts, depth + 1, picked, out, scope, min_level, cap);
    picked.pop_back();
  }
}

}  // namespace detail

/// All compositions of one alternative per part under `scope` whose
/// declared pairwise levels all reach `min_level`, in lexicographic order
/// by part order then alternative order.
inline std::vector<Composition> enumerate_admissible(const Morphology& m, std::string_view scope,
                                                     const EnumerateOptions& opt = {}) {
  if (opt.min_level < 1 || opt.min_level > m.l)
    throw validation_error("min_level outside 1.." + std::to_string(m.l));
  const auto parts = m.parts_under(scope);  // throws on unknown scope
  if (parts.empty()) throw validation_error("scope has no parts: " + std::string(scope));

  const auto& first = *parts.front();
  const int threads = std::min<int>(std::max(opt.threads, 1), static_cast<int>(first.alternatives.size()));
  if (threads <= 1 || parts.size() == 1) {
    std::vector<Composition> out;
    std::vector<std::size_t> picked;
    detail::enumerate_rec(m, parts, 0, picked, out, scope, opt.min_level, opt.cap);
    return out;
  }

  // Partition by the first part's alternative; merge preserves index order,
  // so the result is schedule-independent.
  std::vector<std::future<std::vector<Composition>>> futures;
  for (std::size_t j = 0; j < first.alternatives.size(); ++j) {
    futures.push_back(std::async(std::launch::async, [&, j] {
      std::vector<Composition> out;
      std::vector<std::size_t> picked{j};
      detail::enumerate_rec(m, parts, 1, picked, out, scope, opt.min_level, opt.cap);
      return out;
    }));
  }
  std::vector<Composition> merged;
  for (auto& f : futures) {
    auto part = f.get();
    if (merged.size() + part.size() > opt.cap)
      throw limit_error("enumeration cap of " + std::to_string(opt.cap) + " compositions exceeded");
    merged.insert(merged.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return merged;
}

}  // namespace morphsynth
