#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morphsynth/errors.hpp"
#include "morphsynth/rational.hpp"

namespace morphsynth {

enum class Direction { maximize, minimize };

struct Criterion {
  std::string id;
  Rational weight;
  Direction direction = Direction::maximize;
  std::string scale_note;
};

struct DesignAlternative {
  std::string id;
  std::string part_id;
  std::vector<std::pair<std::string, Rational>> estimates;  // criterion id -> value, in part criteria order
  std::optional<int> priority;                              // 1 = best .. k = worst
  std::vector<double> fuzzy_priority;                       // memberships for r = 1..k; empty when crisp

  const Rational& estimate(std::string_view criterion_id) const {
    for (const auto& [cid, v] : estimates)
      if (cid == criterion_id) return v;
    throw validation_error("alternative " + id + " has no estimate for criterion " + std::string(criterion_id));
  }
};

struct Part {
  std::string id;
  std::string label;
  std::vector<Criterion> criteria;
  std::vector<DesignAlternative> alternatives;
};

/// Node of the system tree. A node without children is a leaf and refers to
/// a Part of the same id.
struct SystemNode {
  std::string id;
  std::string label;
  std::vector<SystemNode> children;
  bool is_leaf() const { return children.empty(); }
};

/// One pairwise estimate: crisp ordinal level, or a membership vector over
/// levels l..0 (best to worst).
struct CompatibilityEntry {
  int level = 0;
  std::vector<double> fuzzy;  // size l+1 when fuzzy, empty when crisp
  bool is_fuzzy() const { return !fuzzy.empty(); }
};

/// Symmetric table of pairwise compatibility estimates between design
/// alternatives of distinct parts. Keys are stored as ordered (min,max)
/// id pairs; lookups accept either order. Missing pairs stay missing --
/// validation decides whether that is an error.
class CompatibilityTable {
public:
  using Key = std::pair<std::string, std::string>;

  int max_level = 3;

  static Key key(std::string_view a, std::string_view b) {
    return a < b ? Key(std::string(a), std::string(b)) : Key(std::string(b), std::string(a));
  }

  void set(std::string_view a, std::string_view b, CompatibilityEntry e) { entries_[key(a, b)] = std::move(e); }

  const CompatibilityEntry* find(std::string_view a, std::string_view b) const {
    auto it = entries_.find(key(a, b));
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool declared(std::string_view a, std::string_view b) const { return find(a, b) != nullptr; }

  const std::map<Key, CompatibilityEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

private:
  std::map<Key, CompatibilityEntry> entries_;
};

/// One design alternative per part of a scope; the unit solution object.
struct Composition {
  std::string scope;
  std::vector<std::pair<std::string, std::string>> selection;  // (part id, da id), in part order

  const std::string& da_of(std::string_view part_id) const {
    for (const auto& [p, d] : selection)
      if (p == part_id) return d;
    throw validation_error("composition has no selection for part " + std::string(part_id));
  }
  std::vector<std::string> da_ids() const {
    std::vector<std::string> out;
    out.reserve(selection.size());
    for (const auto& [p, d] : selection) out.push_back(d);
    return out;
  }
  friend bool operator==(const Composition& a, const Composition& b) {
    return a.scope == b.scope && a.selection == b.selection;
  }
  friend bool operator<(const Composition& a, const Composition& b) {
    return std::tie(a.scope, a.selection) < std::tie(b.scope, b.selection);
  }
};

/// Immutable after validation; see validate_morphology below.
class Morphology {
public:
  SystemNode root;
  std::vector<Part> parts;  // leaf order
  CompatibilityTable compat;
  std::set<std::string> declaring_nodes;  // internal nodes that declared a compatibility list
  int k = 3;                              // priority levels, 1 = best
  int l = 3;                              // compatibility levels, l = best

  const Part& part(std::string_view id) const {
    for (const auto& p : parts)
      if (p.id == id) return p;
    throw validation_error("unknown part: " + std::string(id));
  }

  const DesignAlternative* find_alternative(std::string_view da_id) const {
    auto it = alt_index_.find(std::string(da_id));
    if (it == alt_index_.end()) return nullptr;
    return &parts[it->second.first].alternatives[it->second.second];
  }
  const DesignAlternative& alternative(std::string_view da_id) const {
    const auto* a = find_alternative(da_id);
    if (!a) throw validation_error("unknown design alternative: " + std::string(da_id));
    return *a;
  }

  const SystemNode* find_node(std::string_view id) const { return find_node(root, id); }
  const SystemNode& node(std::string_view id) const {
    const auto* n = find_node(id);
    if (!n) throw validation_error("unknown node: " + std::string(id));
    return *n;
  }

  /// Leaf parts under a node, in tree order.
  std::vector<const Part*> parts_under(std::string_view node_id) const {
    std::vector<const Part*> out;
    collect_parts(node(node_id), out);
    return out;
  }

  /// Crisp priority of an alternative: the stored one, or the pessimistic
  /// argmax aggregation of its fuzzy memberships.
  int crisp_priority(const DesignAlternative& da) const {
    if (da.priority) return *da.priority;
    if (!da.fuzzy_priority.empty()) {
      int best = -1;
      double mu = 0.0;
      for (int r = 1; r <= static_cast<int>(da.fuzzy_priority.size()); ++r) {
        if (da.fuzzy_priority[r - 1] >= mu && da.fuzzy_priority[r - 1] > 0.0) {
          mu = da.fuzzy_priority[r - 1];
          best = r;  // ties fall to the larger (worse) priority
        }
      }
      if (best < 0) throw validation_error("alternative " + da.id + " has all-zero fuzzy priority");
      return best;
    }
    throw validation_error("alternative " + da.id + " carries no priority");
  }

  /// Crisp level of a declared pair; fuzzy entries aggregate pessimistically.
  int crisp_level(const CompatibilityEntry& e) const {
    if (!e.is_fuzzy()) return e.level;
    int best = -1;
    double mu = 0.0;
    for (int i = 0; i < static_cast<int>(e.fuzzy.size()); ++i) {  // index 0 <-> level l
      const int lv = l - i;
      if (e.fuzzy[i] >= mu && e.fuzzy[i] > 0.0) {
        mu = e.fuzzy[i];
        best = lv;  // ties fall to the lower (worse) level because we scan best-to-worst with >=
      }
    }
    if (best < 0) throw validation_error("all-zero fuzzy compatibility entry");
    return best;
  }

  unsigned long long combination_count(std::string_view node_id) const {
    unsigned long long n = 1;
    for (const auto* p : parts_under(node_id)) {
      const unsigned long long q = p->alternatives.size();
      if (q != 0 && n > ULLONG_MAX / q) throw validation_error("combination count overflow");
      n *= q;
    }
    return n;
  }

  void rebuild_index() {
    alt_index_.clear();
    for (std::size_t pi = 0; pi < parts.size(); ++pi)
      for (std::size_t ai = 0; ai < parts[pi].alternatives.size(); ++ai)
        alt_index_[parts[pi].alternatives[ai].id] = {pi, ai};
  }

private:
  static const SystemNode* find_node(const SystemNode& n, std::string_view id) {
    if (n.id == id) return &n;
    for (const auto& c : n.children)
      if (const auto* f = find_node(c, id)) return f;
    return nullptr;
  }
  void collect_parts(const SystemNode& n, std::vector<const Part*>& out) const {
    if (n.is_leaf()) {
      out.push_back(&part(n.id));
      return;
    }
    for (const auto& c : n.children) collect_parts(c, out);
  }

  std::map<std::string, std::pair<std::size_t, std::size_t>> alt_index_;
};

namespace detail {

inline void check_unique_node_ids(const SystemNode& n, std::set<std::string>& seen) {
  if (!seen.insert(n.id).second) throw validation_error("duplicate node id: " + n.id);
  for (const auto& c : n.children) check_unique_node_ids(c, seen);
}

inline void check_node_arity(const SystemNode& n) {
  if (n.children.size() == 1) throw validation_error("internal node " + n.id + " must list at least 2 children");
  for (const auto& c : n.children) check_node_arity(c);
}

}  // namespace detail

struct ValidationOptions {
  bool fill_missing = false;  // permissive mode: absent required pairs become level 0
};

/// Structural validation of an assembled Morphology. Throws
/// validation_error on the first violated invariant; on success the model
/// is immutable by convention and safe to share across threads.
///
/// For every internal node that declares a (non-empty) compatibility list,
/// each pair of alternatives from distinct leaf children of that node must
/// be present in the table; absent pairs are an error, not an implicit 0,
/// unless opts.fill_missing is set.
inline void validate_morphology(Morphology& m, const ValidationOptions& opts = {}) {
  if (m.k < 1) throw validation_error("scales.k must be >= 1");
  if (m.l < 1) throw validation_error("scales.l must be >= 1");
  m.rebuild_index();

  std::set<std::string> node_ids;
  detail::check_unique_node_ids(m.root, node_ids);
  detail::check_node_arity(m.root);

  const auto leaves = [&] {
    std::vector<std::string> out;
    auto rec = [&](auto&& self, const SystemNode& n) -> void {
      if (n.is_leaf()) out.push_back(n.id);
      else for (const auto& c : n.children) self(self, c);
    };
    rec(rec, m.root);
    return out;
  }();
  if (leaves.empty()) throw validation_error("system tree has no leaf");

  if (leaves.size() != m.parts.size())
    throw validation_error("system tree leaves and declared parts disagree");
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (leaves[i] != m.parts[i].id)
      throw validation_error("part order does not match tree leaf order at " + leaves[i]);

  std::set<std::string> da_ids;
  for (const auto& p : m.parts) {
    if (p.alternatives.empty()) throw validation_error("part " + p.id + " has no design alternatives");
    std::set<std::string> local;
    for (const auto& a : p.alternatives) {
      if (a.part_id != p.id) throw validation_error("alternative " + a.id + " does not belong to part " + p.id);
      if (!local.insert(a.id).second) throw validation_error("duplicate alternative id in part " + p.id + ": " + a.id);
      if (!da_ids.insert(a.id).second) throw validation_error("alternative id reused across parts: " + a.id);
      if (a.priority && (*a.priority < 1 || *a.priority > m.k))
        throw validation_error("alternative " + a.id + " priority outside 1.." + std::to_string(m.k));
      if (!a.fuzzy_priority.empty()) {
        if (static_cast<int>(a.fuzzy_priority.size()) != m.k)
          throw validation_error("alternative " + a.id + " fuzzy priority needs k memberships");
        for (double mu : a.fuzzy_priority)
          if (mu < 0.0 || mu > 1.0) throw validation_error("membership outside [0,1] on " + a.id);
      }
      if (!a.estimates.empty()) {
        if (a.estimates.size() != p.criteria.size())
          throw validation_error("alternative " + a.id + " estimates do not cover the part criteria");
        for (const auto& c : p.criteria)
          a.estimate(c.id);  // throws when missing
      }
    }
    if (!p.criteria.empty()) {
      Rational sum;
      std::set<std::string> cids;
      for (const auto& c : p.criteria) {
        if (!cids.insert(c.id).second) throw validation_error("duplicate criterion id: " + c.id);
        sum += c.weight;
      }
      if ((sum - Rational(1)).abs() > Rational(1, 1000000000))
        throw validation_error("criterion weights of part " + p.id + " sum to " + sum.str() + ", expected 1");
    }
  }

  for (const auto& [key, e] : m.compat.entries()) {
    const auto* a = m.find_alternative(key.first);
    const auto* b = m.find_alternative(key.second);
    if (!a || !b)
      throw validation_error("compatibility entry references unknown alternative: " + key.first + "/" + key.second);
    if (a->part_id == b->part_id)
      throw validation_error("compatibility entry relates two alternatives of part " + a->part_id);
    if (e.is_fuzzy()) {
      if (static_cast<int>(e.fuzzy.size()) != m.l + 1)
        throw validation_error("fuzzy compatibility entry needs l+1 memberships");
      for (double mu : e.fuzzy)
        if (mu < 0.0 || mu > 1.0) throw validation_error("membership outside [0,1] in compatibility entry");
    } else if (e.level < 0 || e.level > m.l) {
      throw validation_error("compatibility level outside 0.." + std::to_string(m.l));
    }
  }

  // Totality per declaring node.
  auto rec = [&](auto&& self, const SystemNode& n, const std::set<std::string>& declared_under) -> void {
    if (n.is_leaf()) return;
    if (declared_under.count(n.id)) {
      std::vector<const Part*> leaf_children;
      for (const auto& c : n.children)
        if (c.is_leaf()) leaf_children.push_back(&m.part(c.id));
      for (std::size_t i = 0; i < leaf_children.size(); ++i)
        for (std::size_t j = i + 1; j < leaf_children.size(); ++j)
          for (const auto& da : leaf_children[i]->alternatives)
            for (const auto& db : leaf_children[j]->alternatives)
              if (!m.compat.declared(da.id, db.id)) {
                if (opts.fill_missing) {
                  m.compat.set(da.id, db.id, CompatibilityEntry{0, {}});
                } else {
                  throw validation_error("missing compatibility entry for pair (" + da.id + ", " + db.id +
                                         ") required under node " + n.id);
                }
              }
    }
    for (const auto& c : n.children) self(self, c, declared_under);
  };
  rec(rec, m.root, m.declaring_nodes);

  m.compat.max_level = m.l;
  m.rebuild_index();
  m.combination_count(m.root.id);
}

/// Ordinal pairwise estimate for two alternatives of distinct parts.
/// Unknown pairs and same-part pairs are errors, never implicit zeros.
inline int compatibility(const Morphology& m, std::string_view a, std::string_view b) {
  const auto& da = m.alternative(a);
  const auto& db = m.alternative(b);
  if (da.part_id == db.part_id)
    throw validation_error("compatibility is undefined inside part " + da.part_id);
  const auto* e = m.compat.find(a, b);
  if (!e) throw validation_error("no declared compatibility for pair (" + std::string(a) + ", " + std::string(b) + ")");
  return m.crisp_level(*e);
}

/// Threshold transform: entries at or above the threshold become 1, the
/// rest 0; the result is a binary table (max_level 1).
inline CompatibilityTable binarize_compatibility(const CompatibilityTable& t, int threshold) {
  if (threshold < 1 || threshold > t.max_level)
    throw validation_error("binarize threshold outside 1.." + std::to_string(t.max_level));
  CompatibilityTable out;
  out.max_level = 1;
  for (const auto& [key, e] : t.entries()) {
    if (e.is_fuzzy()) throw validation_error("cannot binarize a fuzzy compatibility entry");
    out.set(key.first, key.second, CompatibilityEntry{e.level >= threshold ? 1 : 0, {}});
  }
  return out;
}

/// Whole-model binarization; the compatibility scale collapses to {0,1}.
inline Morphology binarize_morphology(const Morphology& m, int threshold) {
  Morphology out = m;
  out.compat = binarize_compatibility(m.compat, threshold);
  out.l = 1;
  out.rebuild_index();
  return out;
}

}  // namespace morphsynth
