#include <doctest.h>

#include <random>

#include "morphsynth/qap.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace morphsynth;
using testsupport::load_fixture;

namespace {

QapInstance gsm_qap(const Instance& inst, const char* budget) {
  return derive_qap_instance(inst.morphology, *inst.mcp, Rational::parse(budget));
}

}  // namespace

TEST_CASE("objective sums item profits and declared pair profits") {
  const auto gsm = load_fixture("gsm");
  const auto inst = gsm_qap(gsm, "15");

  CHECK(qap_objective(inst, {}) == Rational(0));
  CHECK(qap_objective(inst, {{"M", "M4"}}) == Rational(3));  // priority 1 -> profit 3, no pairs

  // published greedy selection: linear part 10, plus the declared pairs
  // (M4,L1)=2, (V6,U3)=2, (V6,T1)=3, (U3,T1)=0; cross-subsystem pairs are
  // undeclared and contribute nothing
  const std::vector<std::pair<std::string, std::string>> sel{
      {"M", "M4"}, {"L", "L1"}, {"V", "V6"}, {"U", "U3"}, {"T", "T1"}};
  CHECK(qap_objective(inst, sel) == Rational(17));

  CHECK_THROWS_AS(qap_objective(inst, {{"M", "M4"}, {"M", "M1"}}), validation_error);
  CHECK_THROWS_AS(qap_objective(inst, {{"M", "nope"}}), validation_error);
}

TEST_CASE("zero pair profits reduce the problem to the multiple choice solver") {
  const auto gsm = load_fixture("gsm");
  for (const char* budget : {"14", "15"}) {
    auto inst = gsm_qap(gsm, budget);
    inst.pair_profit.clear();
    const auto qap = solve_qap_exact(inst);
    const auto mcp = solve_mcp_exact(derive_mcp_instance(gsm.morphology, *gsm.mcp, Rational::parse(budget)));
    CHECK(qap.objective == mcp.profit);
  }
}

TEST_CASE("pair profits can overturn the linear preference") {
  QapInstance inst;
  inst.budget = Rational(10);
  inst.groups.push_back({"G1", {{"a1", {Rational(5)}, Rational(1)}, {"a2", {Rational(1)}, Rational(1)}}});
  inst.groups.push_back({"G2", {{"b1", {Rational(5)}, Rational(1)}, {"b2", {Rational(1)}, Rational(1)}}});
  // linear optimum is (a1, b1) at 10; the coupled pair (a2, b2) gets 1+1+20
  inst.pair_profit[CompatibilityTable::key("a2", "b2")] = Rational(20);
  const auto sol = solve_qap_exact(inst);
  CHECK(sol.selection == std::vector<std::pair<std::string, std::string>>{{"G1", "a2"}, {"G2", "b2"}});
  CHECK(sol.objective == Rational(22));
  // hand enumeration of the other three cases: 10, 6, 6
  const auto brute = testsupport::brute_qap(inst);
  REQUIRE(brute.has_value());
  CHECK(brute->objective == Rational(22));
}

TEST_CASE("GSM-derived instance: exact equals the exhaustive oracle") {
  const auto gsm = load_fixture("gsm");
  for (const char* budget : {"14", "15"}) {
    const auto inst = gsm_qap(gsm, budget);
    const auto sol = solve_qap_exact(inst, 5000);
    const auto brute = testsupport::brute_qap(inst);
    REQUIRE(brute.has_value());
    CHECK(sol.objective == brute->objective);
    CHECK(sol.selection == brute->selection);
    const auto greedy = solve_qap_greedy(inst);
    CHECK(greedy.objective <= sol.objective);
    CHECK(greedy.weight <= inst.budget);
  }
}

TEST_CASE("space cap and infeasibility") {
  const auto gsm = load_fixture("gsm");
  CHECK_THROWS_AS(solve_qap_exact(gsm_qap(gsm, "15"), 100), limit_error);
  QapInstance inst;
  inst.budget = Rational(1);
  inst.groups.push_back({"G", {{"heavy", {Rational(1)}, Rational(5)}}});
  CHECK_THROWS_AS(solve_qap_exact(inst), infeasible_error);
  CHECK_THROWS_AS(solve_qap_greedy(inst), infeasible_error);
  SUBCASE("at_most_one admits the empty selection instead") {
    inst.at_most_one = true;
    const auto sol = solve_qap_exact(inst);
    CHECK(sol.selection.empty());
    CHECK(sol.objective == Rational(0));
    const auto greedy = solve_qap_greedy(inst);
    CHECK(greedy.selection.empty());
  }
}

TEST_CASE("exact equals brute force and greedy stays below on random instances") {
  std::mt19937 rng(606070);
  for (int round = 0; round < 150; ++round) {
    auto inst = testsupport::random_qap(rng, /*zero_pairs=*/false);
    inst.at_most_one = round % 2 == 0;
    const auto brute = testsupport::brute_qap(inst);
    if (!brute) {
      CHECK_THROWS_AS(solve_qap_exact(inst), infeasible_error);
      continue;
    }
    const auto sol = solve_qap_exact(inst);
    CAPTURE(round);
    CHECK(sol.objective == brute->objective);
    CHECK(sol.selection == brute->selection);
    if (!inst.at_most_one) {
      bool greedy_ok = true;
      try {
        const auto greedy = solve_qap_greedy(inst);
        CHECK(greedy.objective <= sol.objective);
      } catch (const infeasible_error&) {
        greedy_ok = false;
      }
      CHECK(greedy_ok);  // a feasible instance must not defeat the greedy
    }
  }
}

TEST_CASE("zero pair profits equal the multiple choice optimum on random instances") {
  std::mt19937 rng(606071);
  for (int round = 0; round < 100; ++round) {
    const auto inst = testsupport::random_qap(rng, /*zero_pairs=*/true);
    McpInstance mcp;
    mcp.groups = inst.groups;
    mcp.budget = inst.budget;
    CAPTURE(round);
    CHECK(solve_qap_exact(inst).objective == solve_mcp_exact(mcp).profit);
  }
}

TEST_CASE("multicriteria frontier is exhaustive and non-dominated") {
  const auto gsm = load_fixture("gsm");
  auto inst = gsm_qap(gsm, "15");
  for (auto& g : inst.groups)
    for (auto& it : g.items) it.profit.push_back(gsm.mcp->resource_base - it.weight);
  const auto frontier = solve_qap_multicriteria(inst, 5000);
  REQUIRE(!frontier.empty());
  for (const auto& p : frontier)
    for (const auto& q : frontier) {
      if (&p == &q) continue;
      bool geq = true, strict = false;
      for (std::size_t d = 0; d < p.objective.size(); ++d) {
        if (q.objective[d] < p.objective[d]) geq = false;
        if (q.objective[d] > p.objective[d]) strict = true;
      }
      const bool dominated = geq && strict;
      CHECK_FALSE(dominated);
    }
  // the scalar optimum appears as an extreme point of the frontier
  const auto scalar = solve_qap_exact(gsm_qap(gsm, "15"), 5000);
  Rational best_first;
  for (const auto& p : frontier) best_first = std::max(best_first, p.objective.front(),
                                                       [](const Rational& a, const Rational& b) { return a < b; });
  CHECK(best_first == scalar.objective);
}
