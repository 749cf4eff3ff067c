// morphsynth: combinatorial synthesis of modular systems from instance
// files. Subcommands cover validation, ranking, admissible enumeration,
// ideal-point selection, Pareto filtering, multiple-choice and quadratic
// assignment solvers, hierarchical multicriteria composition, its fuzzy
// variant, and LP export.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "morphsynth/enumerate.hpp"
#include "morphsynth/fuzzy.hpp"
#include "morphsynth/hmmd.hpp"
#include "morphsynth/ideal_point.hpp"
#include "morphsynth/instance_io.hpp"
#include "morphsynth/lp_export.hpp"
#include "morphsynth/mcp.hpp"
#include "morphsynth/model.hpp"
#include "morphsynth/pareto.hpp"
#include "morphsynth/qap.hpp"
#include "morphsynth/ranking.hpp"

namespace {

using namespace morphsynth;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUsage = 64;

std::size_t effective_cap(std::size_t fallback) {
  if (const char* env = std::getenv("MORPHSYNTH_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

/// Truncated (not rounded) 2-decimal rendering, the convention of the
/// reference ratio tables.
std::string fmt_ratio(const Rational& c, const Rational& a) {
  if (a == Rational(0)) return "inf";
  const Rational q = c / a;
  const long long scaled = static_cast<long long>((q * Rational(100)).num() / (q * Rational(100)).den());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", scaled / 100, scaled % 100);
  return buf;
}

std::string composition_str(const Composition& c) {
  std::string s;
  for (const auto& [p, d] : c.selection) s += (s.empty() ? "" : "*") + d;
  return s;
}

std::string vector_str(const EstimateVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.components.size(); ++i) s += (i ? "," : "") + v.components[i].str();
  return s + ")";
}

/// Minimal aligned text table; column widths fit the widest cell.
class TextTable {
public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  void print(std::ostream& os) const {
    std::vector<std::size_t> width(header_.size());
    for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        os << cells[i];
        if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size() + 2, ' ');
      }
      os << "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

Json selection_json(const std::vector<std::pair<std::string, std::string>>& sel) {
  Json j;
  for (const auto& [p, d] : sel) j[p] = d;
  return j;
}

struct CommonArgs {
  std::string file;
  bool json = false;
  int threads = 0;
  bool fill_missing = false;
};

Instance load(const CommonArgs& args) {
  if (args.file.empty()) throw validation_error("no instance file given (use -f <file>)");
  ValidationOptions opts;
  opts.fill_missing = args.fill_missing;
  return load_instance_file(args.file, opts);
}

int run_threads(const CommonArgs& args) {
  if (args.threads > 0) return args.threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

Metric parse_metric(const std::string& name) {
  if (name == "l2") return Metric::l2;
  if (name == "l1") return Metric::l1;
  if (name == "chebyshev") return Metric::chebyshev;
  if (name == "hamming") return Metric::hamming;
  throw validation_error("unknown metric: " + name);
}

// --- subcommand bodies -----------------------------------------------------

int cmd_validate(const CommonArgs& args) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  const auto count = m.combination_count(m.root.id);
  if (args.json) {
    Json out;
    out["valid"] = true;
    out["parts"] = m.parts.size();
    out["combinations"] = count;
    Json sizes;
    for (const auto& p : m.parts) sizes[p.id] = p.alternatives.size();
    out["alternatives_per_part"] = sizes;
    out["scales"] = Json{{"k", m.k}, {"l", m.l}};
    out["compatibility_entries"] = m.compat.size();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "valid; " << m.parts.size() << " parts; " << count << " combinations\n";
  }
  return kExitOk;
}

int cmd_rank(const CommonArgs& args, const std::string& method, const std::string& threshold,
             const std::string& part_id) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  RankingConfig cfg;
  cfg.k = m.k;
  cfg.method = method == "weighted_outranking" ? RankingMethod::weighted_outranking
                                               : RankingMethod::dominance_layers;
  if (method != "weighted_outranking" && method != "dominance_layers")
    throw validation_error("unknown ranking method: " + method);
  if (!threshold.empty()) cfg.concordance_threshold = Rational::parse(threshold);

  Json jout = Json::array();
  TextTable table({"part", "alternative", "computed", "declared"});
  for (const auto& p : m.parts) {
    if (!part_id.empty() && p.id != part_id) continue;
    const auto ranked = rank_alternatives(p, cfg);
    for (const auto& a : p.alternatives) {
      const std::string declared = a.priority ? std::to_string(*a.priority) : "-";
      table.row({p.id, a.id, std::to_string(ranked.at(a.id)), declared});
      Json j;
      j["part"] = p.id;
      j["alternative"] = a.id;
      j["computed"] = ranked.at(a.id);
      if (a.priority) j["declared"] = *a.priority;
      jout.push_back(std::move(j));
    }
  }
  if (args.json)
    std::cout << jout.dump(2) << "\n";
  else
    table.print(std::cout);
  return kExitOk;
}

int cmd_enumerate(const CommonArgs& args, const std::string& scope, int min_level) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  EnumerateOptions opt;
  opt.min_level = min_level;
  opt.cap = effective_cap(1'000'000);
  opt.threads = run_threads(args);
  const std::string sc = scope.empty() ? m.root.id : scope;
  const auto found = enumerate_admissible(m, sc, opt);
  if (args.json) {
    Json out;
    out["scope"] = sc;
    out["min_level"] = min_level;
    out["count"] = found.size();
    Json list = Json::array();
    for (const auto& c : found) list.push_back(selection_json(c.selection));
    out["compositions"] = std::move(list);
    std::cout << out.dump(2) << "\n";
  } else {
    TextTable table({"#", "composition"});
    for (std::size_t i = 0; i < found.size(); ++i)
      table.row({std::to_string(i + 1), composition_str(found[i])});
    table.print(std::cout);
    std::cout << found.size() << " admissible compositions in " << sc << " at min level " << min_level << "\n";
  }
  return kExitOk;
}

int cmd_ideal(const CommonArgs& args, const std::string& scope, int min_level, const std::string& strategy,
              const std::string& metric_name, const std::string& keying_name, const std::string& expert_csv) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  if (min_level == 0) min_level = m.l;  // default: the strictest admissible set
  const std::string sc = scope.empty() ? m.root.id : scope;
  const VectorKeying keying = keying_name == "criteria" ? VectorKeying::criteria : VectorKeying::priority;
  if (keying_name != "criteria" && keying_name != "priority")
    throw validation_error("unknown keying: " + keying_name);

  IdealStrategy strat;
  std::optional<std::vector<Rational>> expert;
  if (strategy == "best_of_alternatives") strat = IdealStrategy::best_of_alternatives;
  else if (strategy == "best_of_scale") strat = IdealStrategy::best_of_scale;
  else if (strategy == "expert") {
    strat = IdealStrategy::expert_supplied;
    std::vector<Rational> v;
    std::stringstream ss(expert_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(Rational::parse(tok));
    expert = std::move(v);
  } else {
    throw validation_error("unknown strategy: " + strategy);
  }

  const auto ideal = generate_ideal(m, sc, strat, keying, expert);
  EnumerateOptions eo;
  eo.min_level = min_level;
  eo.cap = effective_cap(1'000'000);
  eo.threads = run_threads(args);
  const auto candidates = enumerate_admissible(m, sc, eo);
  const auto ranked = select_closest(candidates, m, ideal, parse_metric(metric_name));

  if (args.json) {
    Json out;
    out["scope"] = sc;
    out["metric"] = metric_name;
    Json iv = Json::array();
    for (const auto& c : ideal.components) iv.push_back(c.str());
    out["ideal"] = std::move(iv);
    Json list = Json::array();
    for (const auto& r : ranked) {
      Json j;
      j["composition"] = selection_json(r.composition.selection);
      j["vector"] = vector_str(r.vector);
      j["rho"] = fmt4(r.rho);
      j["tied"] = r.tied;
      list.push_back(std::move(j));
    }
    out["ranked"] = std::move(list);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "ideal " << vector_str(ideal) << ", metric " << metric_name << "\n";
    TextTable table({"#", "composition", "vector", "rho", "tie"});
    for (std::size_t i = 0; i < ranked.size(); ++i)
      table.row({std::to_string(i + 1), composition_str(ranked[i].composition), vector_str(ranked[i].vector),
                 fmt4(ranked[i].rho), ranked[i].tied ? "*" : ""});
    table.print(std::cout);
  }
  return kExitOk;
}

int cmd_pareto(const CommonArgs& args, const std::string& scope, int min_level, const std::string& keying_name,
               bool with_compat, const std::string& from_path) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  if (min_level == 0) min_level = m.l;  // default: the strictest admissible set
  const std::string sc = scope.empty() ? m.root.id : scope;
  const VectorKeying keying = keying_name == "criteria" ? VectorKeying::criteria : VectorKeying::priority;

  std::vector<Composition> candidates;
  if (!from_path.empty()) {
    // consume the JSON output of `enumerate --json`
    std::ifstream in(from_path);
    if (!in) throw validation_error("cannot open " + from_path);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const std::exception& e) {
      throw validation_error(from_path + " is not valid JSON: " + std::string(e.what()));
    }
    const Json& list = doc.is_array() ? doc : doc.at("compositions");
    for (const auto& row : list) {
      Composition c;
      c.scope = sc;
      for (const auto& [pid, did] : row.items()) c.selection.emplace_back(pid, did.get<std::string>());
      candidates.push_back(std::move(c));
    }
  } else {
    EnumerateOptions eo;
    eo.min_level = min_level;
    eo.cap = effective_cap(1'000'000);
    eo.threads = run_threads(args);
    candidates = enumerate_admissible(m, sc, eo);
  }
  if (candidates.empty()) throw infeasible_error("no admissible compositions to filter");

  std::vector<std::vector<Rational>> vectors;
  std::vector<Direction> dirs;
  for (const auto& c : candidates) {
    auto v = composition_vector(m, c, keying).components;
    if (with_compat) v.emplace_back(quality_vector(m, c).w);
    vectors.push_back(std::move(v));
  }
  if (keying == VectorKeying::priority) {
    dirs.assign(m.parts_under(sc).size(), Direction::minimize);
  } else {
    for (const auto* p : m.parts_under(sc))
      for (const auto& crit : p->criteria) dirs.push_back(crit.direction);
  }
  if (with_compat) dirs.push_back(Direction::maximize);

  const auto keep = pareto_filter_indices(vectors, dirs);
  if (args.json) {
    Json out = Json::array();
    for (std::size_t i : keep) {
      Json j;
      j["composition"] = selection_json(candidates[i].selection);
      Json v = Json::array();
      for (const auto& x : vectors[i]) v.push_back(x.str());
      j["vector"] = std::move(v);
      out.push_back(std::move(j));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    TextTable table({"#", "composition", "vector"});
    std::size_t n = 0;
    for (std::size_t i : keep) {
      std::string v = "(";
      for (std::size_t t = 0; t < vectors[i].size(); ++t) v += (t ? "," : "") + vectors[i][t].str();
      v += ")";
      table.row({std::to_string(++n), composition_str(candidates[i]), v});
    }
    table.print(std::cout);
    std::cout << keep.size() << " Pareto-efficient of " << candidates.size() << " admissible\n";
  }
  return kExitOk;
}

int cmd_mcp(const CommonArgs& args, const std::string& budget_str, const std::string& solver) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  if (!inst.mcp) throw validation_error("instance declares no mcp resource config");
  const Rational budget = Rational::parse(budget_str);
  const McpInstance prob = derive_mcp_instance(m, *inst.mcp, budget);

  std::vector<std::pair<std::string, std::string>> selected;
  Json extra;
  std::vector<McpFrontierPoint> frontier;
  if (solver == "greedy") {
    const auto sol = solve_mcp_greedy(prob);
    selected = sol.selection;
    extra["profit"] = sol.profit.str();
    extra["weight"] = sol.weight.str();
  } else if (solver == "exact") {
    const auto sol = solve_mcp_exact(prob, effective_cap(10'000'000));
    selected = sol.selection;
    extra["profit"] = sol.profit.str();
    extra["weight"] = sol.weight.str();
  } else if (solver == "pareto") {
    McpInstance multi = prob;  // profit vector (profit, resource estimate)
    for (std::size_t g = 0; g < multi.groups.size(); ++g)
      for (auto& it : multi.groups[g].items) {
        const Rational z = inst.mcp->resource_base - it.weight;
        it.profit.push_back(z);
      }
    frontier = solve_mcp_multicriteria(multi, effective_cap(1'000'000));
  } else {
    throw validation_error("unknown solver: " + solver);
  }

  if (solver == "pareto") {
    if (args.json) {
      Json out = Json::array();
      for (const auto& p : frontier) {
        Json j;
        j["selection"] = selection_json(p.selection);
        Json v = Json::array();
        for (const auto& x : p.profit) v.push_back(x.str());
        j["profit"] = std::move(v);
        j["weight"] = p.weight.str();
        out.push_back(std::move(j));
      }
      std::cout << out.dump(2) << "\n";
    } else {
      TextTable table({"#", "selection", "profit", "weight"});
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        std::string v = "(";
        for (std::size_t t = 0; t < frontier[i].profit.size(); ++t)
          v += (t ? "," : "") + frontier[i].profit[t].str();
        v += ")";
        Composition c;
        c.selection = frontier[i].selection;
        table.row({std::to_string(i + 1), composition_str(c), v, frontier[i].weight.str()});
      }
      table.print(std::cout);
    }
    return kExitOk;
  }

  if (args.json) {
    Json out;
    out["budget"] = budget.str();
    out["solver"] = solver;
    out["selection"] = selection_json(selected);
    out.update(extra);
    std::cout << out.dump(2) << "\n";
  } else {
    TextTable table({"(i,j)", "da", "r", "c", "a", "c/a", "selected"});
    for (std::size_t g = 0; g < prob.groups.size(); ++g)
      for (std::size_t j = 0; j < prob.groups[g].items.size(); ++j) {
        const auto& it = prob.groups[g].items[j];
        const auto& da = m.alternative(it.id);
        const bool sel = std::find(selected.begin(), selected.end(),
                                   std::make_pair(prob.groups[g].id, it.id)) != selected.end();
        table.row({"(" + std::to_string(g + 1) + "," + std::to_string(j + 1) + ")", it.id,
                   std::to_string(m.crisp_priority(da)), it.scalar_profit().str(), it.weight.str(),
                   fmt_ratio(it.scalar_profit(), it.weight), sel ? "yes" : "no"});
      }
    table.print(std::cout);
    std::cout << "profit " << extra["profit"].get<std::string>() << "; weight "
              << extra["weight"].get<std::string>() << "; budget " << budget.str() << "\n";
  }
  return kExitOk;
}

int cmd_qap(const CommonArgs& args, const std::string& budget_str, const std::string& solver, bool pareto,
            bool at_most_one) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  if (!inst.mcp) throw validation_error("instance declares no mcp resource config");
  const Rational budget = Rational::parse(budget_str);
  QapInstance prob = derive_qap_instance(m, *inst.mcp, budget);
  prob.at_most_one = at_most_one;

  if (pareto) {
    QapInstance multi = prob;
    for (auto& g : multi.groups)
      for (auto& it : g.items) it.profit.push_back(inst.mcp->resource_base - it.weight);
    const auto frontier = solve_qap_multicriteria(multi, effective_cap(1'000'000));
    Json out = Json::array();
    TextTable table({"#", "selection", "objective", "weight"});
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      std::string v = "(";
      for (std::size_t t = 0; t < frontier[i].objective.size(); ++t)
        v += (t ? "," : "") + frontier[i].objective[t].str();
      v += ")";
      Composition c;
      c.selection = frontier[i].selection;
      table.row({std::to_string(i + 1), composition_str(c), v, frontier[i].weight.str()});
      Json j;
      j["selection"] = selection_json(frontier[i].selection);
      j["objective"] = v;
      j["weight"] = frontier[i].weight.str();
      out.push_back(std::move(j));
    }
    if (args.json)
      std::cout << out.dump(2) << "\n";
    else
      table.print(std::cout);
    return kExitOk;
  }

  QapSolution sol;
  if (solver == "exact")
    sol = solve_qap_exact(prob, effective_cap(1'000'000));
  else if (solver == "greedy")
    sol = solve_qap_greedy(prob);
  else
    throw validation_error("unknown solver: " + solver);

  if (args.json) {
    Json out;
    out["budget"] = budget.str();
    out["solver"] = solver;
    out["selection"] = selection_json(sol.selection);
    out["objective"] = sol.objective.str();
    out["weight"] = sol.weight.str();
    std::cout << out.dump(2) << "\n";
  } else {
    Composition c;
    c.selection = sol.selection;
    std::cout << composition_str(c) << "  objective " << sol.objective.str() << "  weight " << sol.weight.str()
              << "\n";
  }
  return kExitOk;
}

int cmd_hmmd(const CommonArgs& args, const std::string& scope, int min_w, bool no_prune, bool neighborhood) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  HmmdOptions opt;
  opt.min_w = min_w;
  opt.prune = !no_prune;
  opt.cap = effective_cap(1'000'000);
  opt.threads = run_threads(args);

  std::vector<ScoredComposition> result;
  if (neighborhood) {
    result = clique_neighborhood(m, scope.empty() ? m.root.id : scope, opt);
  } else if (scope.empty() || scope == m.root.id) {
    result = solve_hierarchical(m, opt);
  } else {
    result = solve_morphological_clique(m, scope, opt);
  }

  if (args.json) {
    Json out = Json::array();
    for (const auto& [c, q] : result) {
      Json j;
      j["composition"] = selection_json(c.selection);
      j["quality"] = q.str();
      out.push_back(std::move(j));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    TextTable table({"#", "composition", "N(S)"});
    for (std::size_t i = 0; i < result.size(); ++i)
      table.row({std::to_string(i + 1), composition_str(result[i].first), result[i].second.str()});
    table.print(std::cout);
    std::cout << result.size() << (neighborhood ? " near-frontier" : " Pareto-efficient") << " composite DAs\n";
  }
  return kExitOk;
}

int cmd_hmmd_fuzzy(const CommonArgs& args, int fuzzy_case, double alpha, const std::string& pref, int min_w) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  FuzzyOptions opt;
  opt.alpha = alpha;
  opt.min_w = min_w;
  if (pref == "maxmem") opt.preference = PreferenceRule::maxmem;
  else if (pref == "pessimistic") opt.preference = PreferenceRule::pessimistic;
  else throw validation_error("unknown preference rule: " + pref);

  const auto decisions = solve_fuzzy(m, fuzzy_case, opt);
  if (args.json) {
    Json out = Json::array();
    for (const auto& d : decisions) {
      Json j;
      j["composition"] = selection_json(d.composition.selection);
      Json sup = Json::array();
      for (const auto& p : d.support) {
        Json s;
        s["quality"] = p.quality.str();
        s["membership"] = fmt4(p.membership);
        sup.push_back(std::move(s));
      }
      j["support"] = std::move(sup);
      out.push_back(std::move(j));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    TextTable table({"#", "composition", "support"});
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      std::string sup;
      for (const auto& p : decisions[i].support)
        sup += (sup.empty() ? "" : " ") + p.quality.str() + "@" + fmt4(p.membership);
      table.row({std::to_string(i + 1), composition_str(decisions[i].composition), sup});
    }
    table.print(std::cout);
  }
  return kExitOk;
}

int cmd_export_lp(const CommonArgs& args, const std::string& kind, const std::string& out_path, int min_level,
                  const std::string& budget_str) {
  const Instance inst = load(args);
  const auto& m = inst.morphology;
  std::ostringstream text;
  LpSummary sum;
  if (kind == "ma") {
    sum = export_lp_ma(m, m.root.id, min_level, text);
  } else if (kind == "mcp" || kind == "qap") {
    if (!inst.mcp) throw validation_error("instance declares no mcp resource config");
    if (budget_str.empty()) throw validation_error("--budget is required for " + kind + " export");
    const Rational budget = Rational::parse(budget_str);
    if (kind == "mcp") {
      sum = export_lp_mcp(derive_mcp_instance(m, *inst.mcp, budget), text);
    } else {
      sum = export_lp_qap(derive_qap_instance(m, *inst.mcp, budget), text);
    }
  } else {
    throw validation_error("unknown export kind: " + kind);
  }

  if (out_path.empty() || out_path == "-") {
    std::cout << text.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw validation_error("cannot write " + out_path);
    f << text.str();
  }
  if (args.json) {
    Json j;
    j["variables"] = sum.variables;
    j["constraints"] = sum.constraints;
    std::cout << j.dump(2) << "\n";
  } else if (!out_path.empty() && out_path != "-") {
    std::cout << sum.variables << " variables; " << sum.constraints << " constraints; written to " << out_path
              << "\n";
  }
  return kExitOk;
}

int cmd_report(CommonArgs args, const std::string& fixture, const std::string& budgets_csv) {
  if (args.file.empty() && !fixture.empty()) {
    const std::string base = std::getenv("MORPHSYNTH_FIXTURES") ? std::getenv("MORPHSYNTH_FIXTURES") : "fixtures";
    args.file = base + "/" + fixture + ".json";
  }
  const Instance inst = load(args);
  const auto& m = inst.morphology;

  EnumerateOptions eo;
  eo.min_level = m.l;  // the strictest admissibility, as in the worked comparison
  eo.cap = effective_cap(1'000'000);
  eo.threads = run_threads(args);
  const auto admissible = enumerate_admissible(m, m.root.id, eo);

  TextTable table({"method", "composite DA", "N(S)"});
  Json jrows = Json::array();
  auto add = [&](const std::string& method, const std::string& da, const std::string& quality) {
    table.row({method, da, quality});
    Json j;
    j["method"] = method;
    j["composite"] = da;
    j["quality"] = quality;
    jrows.push_back(std::move(j));
  };

  add("basic-ma", std::to_string(admissible.size()) + " admissible compositions", "-");

  if (!admissible.empty()) {
    const auto ideal = generate_ideal(m, m.root.id, IdealStrategy::best_of_alternatives, VectorKeying::priority);
    const auto ranked = select_closest(admissible, m, ideal, Metric::l2);
    const double best = ranked.front().rho;
    double second = best;
    for (const auto& r : ranked)
      if (r.rho > best) { second = r.rho; break; }
    for (const auto& r : ranked) {
      if (r.rho > second) break;
      add(r.rho == best ? "ideal-point best" : "ideal-point near", composition_str(r.composition),
          quality_vector(m, r.composition).str());
    }

    std::vector<std::vector<Rational>> vectors;
    for (const auto& c : admissible) vectors.push_back(composition_vector(m, c, VectorKeying::priority).components);
    const std::vector<Direction> dirs(m.parts.size(), Direction::minimize);
    for (std::size_t i : pareto_filter_indices(vectors, dirs))
      add("pareto-ma", composition_str(admissible[i]), quality_vector(m, admissible[i]).str());
  }

  if (inst.mcp) {
    std::stringstream ss(budgets_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const Rational b = Rational::parse(tok);
      const auto sol = solve_mcp_greedy(derive_mcp_instance(m, *inst.mcp, b));
      Composition c;
      c.scope = m.root.id;
      c.selection = sol.selection;
      add("mcp b=" + b.str(), composition_str(c), quality_vector(m, c).str());
    }
  }

  HmmdOptions ho;
  ho.cap = effective_cap(1'000'000);
  ho.threads = run_threads(args);
  for (const auto& [c, q] : solve_hierarchical(m, ho)) add("hmmd", composition_str(c), q.str());

  if (args.json)
    std::cout << jrows.dump(2) << "\n";
  else
    table.print(std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphological synthesis toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string scope, strategy = "best_of_alternatives", metric = "l2", keying = "priority", expert_csv;
  std::string method = "dominance_layers", threshold, part_id;
  std::string budget, solver = "exact", kind = "ma", out_path, fixture, budgets = "14,15", from_path;
  int min_level = 1, ideal_min_level = 0, pareto_min_level = 0, min_w = 1, fuzzy_case = 1,
      fill_missing_level = -1;
  double alpha = 0.0;
  std::string pref = "maxmem";
  bool with_compat = false, no_prune = false, neighborhood = false, qap_pareto = false, at_most_one = false;

  auto add_common = [&](CLI::App* cmd, bool file_required = true) {
    auto* f = cmd->add_option("-f,--file", common.file, "instance JSON file");
    if (file_required) f->required();
    cmd->add_flag("--json", common.json, "emit JSON instead of text");
    cmd->add_option("--threads", common.threads, "solver parallelism cap (default: hardware)");
    cmd->add_option("--fill-missing", fill_missing_level,
                    "permissive mode: treat missing required pairs as this level (only 0 is allowed)");
  };

  auto* validate = app.add_subcommand("validate", "parse and validate an instance");
  add_common(validate);

  auto* rank = app.add_subcommand("rank", "derive ordinal priorities from estimates");
  add_common(rank);
  rank->add_option("--method", method, "dominance_layers|weighted_outranking");
  rank->add_option("--threshold", threshold, "concordance threshold in (0.5,1]");
  rank->add_option("--part", part_id, "rank a single part");

  auto* enumerate = app.add_subcommand("enumerate", "list admissible compositions");
  add_common(enumerate);
  enumerate->add_option("--scope", scope, "internal node (default: root)");
  enumerate->add_option("--min-level", min_level, "admissibility threshold (default 1)");

  auto* ideal = app.add_subcommand("ideal", "rank admissible compositions by closeness to an ideal point");
  add_common(ideal);
  ideal->add_option("--scope", scope, "internal node (default: root)");
  ideal->add_option("--min-level", ideal_min_level, "admissibility threshold (default: the top level)");
  ideal->add_option("--strategy", strategy, "best_of_alternatives|best_of_scale|expert");
  ideal->add_option("--metric", metric, "l2|l1|chebyshev|hamming");
  ideal->add_option("--keying", keying, "priority|criteria");
  ideal->add_option("--expert", expert_csv, "comma-separated expert ideal vector");

  auto* pareto = app.add_subcommand("pareto", "Pareto-efficient admissible compositions");
  add_common(pareto);
  pareto->add_option("--scope", scope, "internal node (default: root)");
  pareto->add_option("--min-level", pareto_min_level, "admissibility threshold (default: the top level)");
  pareto->add_option("--keying", keying, "priority|criteria");
  pareto->add_flag("--with-compat", with_compat, "append min pairwise compatibility as a maximize component");
  pareto->add_option("--from", from_path, "JSON output of `enumerate --json` to filter instead of enumerating");

  auto* mcp = app.add_subcommand("mcp", "multiple choice knapsack over the derived instance");
  add_common(mcp);
  mcp->add_option("--budget", budget, "resource budget")->required();
  mcp->add_option("--solver", solver, "greedy|exact|pareto");

  auto* qap = app.add_subcommand("qap", "quadratic assignment over the derived instance");
  add_common(qap);
  qap->add_option("--budget", budget, "resource budget")->required();
  qap->add_option("--solver", solver, "exact|greedy");
  qap->add_flag("--pareto", qap_pareto, "multicriteria vector objective frontier");
  qap->add_flag("--at-most-one", at_most_one, "allow empty groups (<= 1 per group)");

  auto* hmmd = app.add_subcommand("hmmd", "hierarchical morphological multicriteria design");
  add_common(hmmd);
  hmmd->add_option("--scope", scope, "solve a single internal node instead of the tree");
  hmmd->add_option("--min-w", min_w, "admissible minimum compatibility (default 1)");
  hmmd->add_flag("--no-prune", no_prune, "cross unpruned child solutions (oracle mode)");
  hmmd->add_flag("--neighborhood", neighborhood, "list solutions one lattice step below the frontier");

  auto* fuzzy = app.add_subcommand("hmmd-fuzzy", "HMMD under fuzzy estimates");
  add_common(fuzzy);
  fuzzy->add_option("--case", fuzzy_case, "1..4: which estimates are aggregated first");
  fuzzy->add_option("--alpha", alpha, "support cut level in [0,1]");
  fuzzy->add_option("--pref", pref, "maxmem|pessimistic");
  fuzzy->add_option("--min-w", min_w, "pessimistic admissibility threshold");

  auto* export_lp = app.add_subcommand("export-lp", "write a 0-1 LP formulation");
  add_common(export_lp);
  export_lp->add_option("--kind", kind, "ma|mcp|qap");
  export_lp->add_option("-o,--out", out_path, "output file (default: stdout)");
  export_lp->add_option("--min-level", min_level, "admissibility threshold for ma");
  export_lp->add_option("--budget", budget, "budget for mcp/qap");

  auto* report = app.add_subcommand("report", "run every method and tabulate the composites");
  add_common(report, /*file_required=*/false);
  report->add_option("--fixture", fixture, "bundled fixture name (resolves fixtures/<name>.json)");
  report->add_option("--budgets", budgets, "comma-separated mcp budgets (default 14,15)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (fill_missing_level >= 0) {
    if (fill_missing_level != 0) {
      std::cerr << "error: --fill-missing only supports level 0\n";
      return kExitUsage;
    }
    common.fill_missing = true;
  }

  try {
    if (validate->parsed()) return cmd_validate(common);
    if (rank->parsed()) return cmd_rank(common, method, threshold, part_id);
    if (enumerate->parsed()) return cmd_enumerate(common, scope, min_level);
    if (ideal->parsed()) return cmd_ideal(common, scope, ideal_min_level, strategy, metric, keying, expert_csv);
    if (pareto->parsed()) return cmd_pareto(common, scope, pareto_min_level, keying, with_compat, from_path);
    if (mcp->parsed()) return cmd_mcp(common, budget, solver);
    if (qap->parsed()) return cmd_qap(common, budget, solver, qap_pareto, at_most_one);
    if (hmmd->parsed()) return cmd_hmmd(common, scope, min_w, no_prune, neighborhood);
    if (fuzzy->parsed()) return cmd_hmmd_fuzzy(common, fuzzy_case, alpha, pref, min_w);
    if (export_lp->parsed()) return cmd_export_lp(common, kind, out_path, min_level, budget);
    if (report->parsed()) return cmd_report(common, fixture, budgets);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const limit_error& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}
