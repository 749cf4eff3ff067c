#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "morphsynth/model.hpp"

namespace morphsynth {

using Json = nlohmann::ordered_json;

/// Optional multiple-choice-problem derivation config carried by an
/// instance: which criterion supplies the per-part resource estimate, or a
/// literal override, plus the base of the "resource = base - estimate" rule.
struct McpConfig {
  Rational resource_base{11};
  struct PartResource {
    std::string criterion;                          // empty when overridden
    std::optional<Rational> override_all;           // one literal for every alternative
    std::map<std::string, Rational> override_per_da;  // or per-alternative literals
  };
  std::map<std::string, PartResource> resource;
};

struct Instance {
  Morphology morphology;
  std::optional<McpConfig> mcp;
};

namespace detail {

inline SystemNode parse_node(const Json& j, CompatibilityTable& table, std::set<std::string>& declaring) {
  SystemNode n;
  if (!j.contains("id")) throw validation_error("system node without id");
  n.id = j.at("id").get<std::string>();
  if (j.contains("label")) n.label = j.at("label").get<std::string>();
  if (j.contains("children"))
    for (const auto& c : j.at("children")) n.children.push_back(parse_node(c, table, declaring));
  if (j.contains("compatibility")) {
    const auto& list = j.at("compatibility");
    if (!list.empty()) declaring.insert(n.id);
    for (const auto& e : list) {
      CompatibilityEntry entry;
      if (e.contains("fuzzy")) {
        for (const auto& mu : e.at("fuzzy"))
          entry.fuzzy.push_back(mu.is_string() ? Rational::parse(mu.get<std::string>()).to_double()
                                               : mu.get<double>());
      } else {
        entry.level = e.at("level").get<int>();
      }
      const auto a = e.at("a").get<std::string>();
      const auto b = e.at("b").get<std::string>();
      if (table.declared(a, b)) throw validation_error("duplicate compatibility entry (" + a + ", " + b + ")");
      table.set(a, b, std::move(entry));
    }
  }
  return n;
}

inline Rational parse_rational(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw validation_error("rationals must be decimal strings or integers, got: " + j.dump());
}

}  // namespace detail

/// Parse and validate an instance document.
inline Instance load_instance(const Json& doc, const ValidationOptions& opts = {}) {
  Instance inst;
  Morphology& m = inst.morphology;
  if (doc.contains("scales")) {
    m.k = doc.at("scales").value("k", 3);
    m.l = doc.at("scales").value("l", 3);
  }
  if (!doc.contains("system")) throw validation_error("instance document lacks a system tree");
  m.root = detail::parse_node(doc.at("system"), m.compat, m.declaring_nodes);

  std::map<std::string, std::vector<Criterion>> criteria_by_part;
  if (doc.contains("criteria")) {
    for (const auto& c : doc.at("criteria")) {
      Criterion crit;
      crit.id = c.at("id").get<std::string>();
      crit.weight = detail::parse_rational(c.at("weight"));
      const auto dir = c.value("direction", "maximize");
      if (dir == "maximize") crit.direction = Direction::maximize;
      else if (dir == "minimize") crit.direction = Direction::minimize;
      else throw validation_error("bad criterion direction: " + dir);
      crit.scale_note = c.value("scale_note", "");
      criteria_by_part[c.at("part").get<std::string>()].push_back(std::move(crit));
    }
  }

  std::map<std::string, std::vector<DesignAlternative>> alts_by_part;
  if (doc.contains("alternatives")) {
    for (const auto& a : doc.at("alternatives")) {
      DesignAlternative da;
      da.id = a.at("id").get<std::string>();
      da.part_id = a.at("part").get<std::string>();
      if (a.contains("estimates"))
        for (const auto& [cid, v] : a.at("estimates").items())
          da.estimates.emplace_back(cid, detail::parse_rational(v));
      if (a.contains("priority")) da.priority = a.at("priority").get<int>();
      if (a.contains("fuzzy_priority"))
        for (const auto& mu : a.at("fuzzy_priority"))
          da.fuzzy_priority.push_back(mu.is_string() ? Rational::parse(mu.get<std::string>()).to_double()
                                                     : mu.get<double>());
      alts_by_part[da.part_id].push_back(std::move(da));
    }
  }

  // Parts materialize in tree leaf order.
  auto rec = [&](auto&& self, const SystemNode& n) -> void {
    if (n.is_leaf()) {
      Part p;
      p.id = n.id;
      p.label = n.label;
      if (auto it = criteria_by_part.find(p.id); it != criteria_by_part.end()) p.criteria = std::move(it->second);
      if (auto it = alts_by_part.find(p.id); it != alts_by_part.end()) p.alternatives = std::move(it->second);
      m.parts.push_back(std::move(p));
      return;
    }
    for (const auto& c : n.children) self(self, c);
  };
  rec(rec, m.root);

  for (const auto& [pid, v] : alts_by_part)
    if (std::none_of(m.parts.begin(), m.parts.end(), [&](const Part& p) { return p.id == pid; }))
      throw validation_error("alternatives reference unknown part: " + pid);
  for (const auto& [pid, v] : criteria_by_part)
    if (std::none_of(m.parts.begin(), m.parts.end(), [&](const Part& p) { return p.id == pid; }))
      throw validation_error("criteria reference unknown part: " + pid);

  if (doc.contains("mcp")) {
    McpConfig cfg;
    const auto& mj = doc.at("mcp");
    if (mj.contains("resource_base")) cfg.resource_base = detail::parse_rational(mj.at("resource_base"));
    if (mj.contains("resource")) {
      for (const auto& [pid, rj] : mj.at("resource").items()) {
        McpConfig::PartResource r;
        if (rj.contains("criterion")) r.criterion = rj.at("criterion").get<std::string>();
        if (rj.contains("override")) {
          const auto& ov = rj.at("override");
          if (ov.is_object())
            for (const auto& [did, val] : ov.items()) r.override_per_da[did] = detail::parse_rational(val);
          else
            r.override_all = detail::parse_rational(ov);
        }
        cfg.resource[pid] = std::move(r);
      }
    }
    inst.mcp = std::move(cfg);
  }

  validate_morphology(m, opts);
  return inst;
}

inline Instance load_instance_file(const std::string& path, const ValidationOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open instance file: " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const std::exception& e) {
    throw validation_error("instance file " + path + " is not valid JSON: " + e.what());
  }
  return load_instance(doc, opts);
}

namespace detail {

inline Json node_json(const Morphology& m, const SystemNode& n) {
  Json j;
  j["id"] = n.id;
  if (!n.label.empty()) j["label"] = n.label;
  if (!n.is_leaf()) {
    j["children"] = Json::array();
    for (const auto& c : n.children) j["children"].push_back(node_json(m, c));
  }
  if (m.declaring_nodes.count(n.id)) {
    Json list = Json::array();
    // emitted in part order so serialization is reproducible
    std::vector<const Part*> leaf_children;
    for (const auto& c : n.children)
      if (c.is_leaf()) leaf_children.push_back(&m.part(c.id));
    for (std::size_t i = 0; i < leaf_children.size(); ++i)
      for (std::size_t j2 = i + 1; j2 < leaf_children.size(); ++j2)
        for (const auto& da : leaf_children[i]->alternatives)
          for (const auto& db : leaf_children[j2]->alternatives)
            if (const auto* e = m.compat.find(da.id, db.id)) {
              Json ej;
              ej["a"] = da.id;
              ej["b"] = db.id;
              if (e->is_fuzzy()) {
                Json f = Json::array();
                for (double mu : e->fuzzy) {
                  char buf[32];
                  std::snprintf(buf, sizeof buf, "%.6g", mu);
                  f.push_back(std::string(buf));
                }
                ej["fuzzy"] = f;
              } else {
                ej["level"] = e->level;
              }
              list.push_back(std::move(ej));
            }
    j["compatibility"] = std::move(list);
  }
  return j;
}

}  // namespace detail

/// Serialize back to the instance document format. Round-tripping a valid
/// instance yields a structurally identical Morphology.
inline Json to_json(const Instance& inst) {
  const Morphology& m = inst.morphology;
  Json doc;
  doc["scales"] = Json{{"k", m.k}, {"l", m.l}};
  doc["system"] = detail::node_json(m, m.root);
  Json criteria = Json::array();
  for (const auto& p : m.parts)
    for (const auto& c : p.criteria) {
      Json cj;
      cj["id"] = c.id;
      cj["part"] = p.id;
      cj["weight"] = c.weight.str();
      cj["direction"] = c.direction == Direction::maximize ? "maximize" : "minimize";
      if (!c.scale_note.empty()) cj["scale_note"] = c.scale_note;
      criteria.push_back(std::move(cj));
    }
  doc["criteria"] = std::move(criteria);
  Json alts = Json::array();
  for (const auto& p : m.parts)
    for (const auto& a : p.alternatives) {
      Json aj;
      aj["id"] = a.id;
      aj["part"] = p.id;
      if (!a.estimates.empty()) {
        Json est;
        for (const auto& [cid, v] : a.estimates) est[cid] = v.str();
        aj["estimates"] = std::move(est);
      }
      if (a.priority) aj["priority"] = *a.priority;
      if (!a.fuzzy_priority.empty()) {
        Json f = Json::array();
        for (double mu : a.fuzzy_priority) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.6g", mu);
          f.push_back(std::string(buf));
        }
        aj["fuzzy_priority"] = f;
      }
      alts.push_back(std::move(aj));
    }
  doc["alternatives"] = std::move(alts);
  if (inst.mcp) {
    Json mj;
    mj["resource_base"] = inst.mcp->resource_base.str();
    Json res;
    for (const auto& [pid, r] : inst.mcp->resource) {
      Json rj;
      if (!r.criterion.empty()) rj["criterion"] = r.criterion;
      if (r.override_all) rj["override"] = r.override_all->str();
      if (!r.override_per_da.empty()) {
        Json ov;
        for (const auto& [did, v] : r.override_per_da) ov[did] = v.str();
        rj["override"] = std::move(ov);
      }
      res[pid] = std::move(rj);
    }
    mj["resource"] = std::move(res);
    doc["mcp"] = std::move(mj);
  }
  return doc;
}

}  // namespace morphsynth
