#include <doctest.h>

#include <random>

#include "morphsynth/mcp.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace morphsynth;
using testsupport::load_fixture;

namespace {

struct Row {
  const char* id;
  int c;
  const char* a;
};

// profit and resource columns of the published derivation table
const Row kDerivationRows[] = {
    {"M1", 2, "5.0"}, {"M2", 1, "3.0"}, {"M3", 1, "2.0"}, {"M4", 3, "6.0"}, {"M5", 2, "4.8"},
    {"L1", 3, "1.0"}, {"L2", 3, "1.0"}, {"L3", 2, "1.0"}, {"L4", 3, "1.0"},
    {"V1", 3, "5.0"}, {"V2", 2, "4.0"}, {"V3", 1, "2.0"}, {"V4", 2, "4.0"}, {"V5", 3, "5.0"}, {"V6", 1, "1.0"},
    {"U1", 3, "6.0"}, {"U2", 1, "5.0"}, {"U3", 2, "5.0"}, {"U4", 3, "8.0"}, {"U5", 2, "5.0"},
    {"T1", 1, "1.0"}, {"T2", 3, "8.0"}, {"T3", 2, "4.0"}, {"T4", 2, "3.0"}, {"T5", 3, "7.0"}};

McpInstance gsm_instance(const Instance& inst, const char* budget) {
  return derive_mcp_instance(inst.morphology, *inst.mcp, Rational::parse(budget));
}

std::vector<std::string> items_of(const McpSolution& sol) {
  std::vector<std::string> out;
  for (const auto& [g, i] : sol.selection) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("derivation reproduces the published profit and resource columns") {
  const auto gsm = load_fixture("gsm");
  const auto inst = gsm_instance(gsm, "14");
  std::map<std::string, std::pair<Rational, Rational>> derived;
  for (const auto& g : inst.groups)
    for (const auto& it : g.items) derived[it.id] = {it.scalar_profit(), it.weight};
  for (const auto& row : kDerivationRows) {
    CAPTURE(row.id);
    CHECK(derived.at(row.id).first == Rational(row.c));
    CHECK(derived.at(row.id).second == Rational::parse(row.a));
  }
  // spot values called out in the derivation rules
  CHECK(derived.at("M1") == std::make_pair(Rational(2), Rational(5)));   // r=2, estimate 6
  CHECK(derived.at("T2") == std::make_pair(Rational(3), Rational(8)));   // r=1, estimate 3
  for (const auto* l : {"L1", "L2", "L3", "L4"}) CHECK(derived.at(l).second == Rational(1));
}

TEST_CASE("greedy reproduces the published selections at both budgets") {
  const auto gsm = load_fixture("gsm");
  {
    const auto sol = solve_mcp_greedy(gsm_instance(gsm, "14"));
    CHECK(items_of(sol) == std::vector<std::string>{"M4", "L1", "V6", "U3", "T1"});
    CHECK(sol.weight == Rational(14));
    CHECK(sol.profit == Rational(10));
  }
  {
    const auto sol = solve_mcp_greedy(gsm_instance(gsm, "15"));
    CHECK(items_of(sol) == std::vector<std::string>{"M4", "L1", "V6", "U1", "T1"});
    CHECK(sol.weight == Rational(15));
    CHECK(sol.profit == Rational(11));
  }
}

TEST_CASE("an unconstrained budget selects each group's best profit") {
  const auto gsm = load_fixture("gsm");
  const auto sol = solve_mcp_greedy(gsm_instance(gsm, "100"));
  // max profit per group with the greedy's tie preference for ratio first
  CHECK(sol.profit == Rational(15));
  const auto exact = solve_mcp_exact(gsm_instance(gsm, "100"));
  CHECK(exact.profit == Rational(15));
}

TEST_CASE("exact dynamic program against the exhaustive oracle on the GSM budgets") {
  const auto gsm = load_fixture("gsm");
  for (const char* budget : {"14", "15"}) {
    const auto inst = gsm_instance(gsm, budget);
    const auto dp = solve_mcp_exact(inst);
    const auto brute = testsupport::brute_mcp(inst);
    REQUIRE(brute.has_value());
    CHECK(dp.profit == brute->profit);
    CHECK(dp.weight == brute->weight);
    CHECK(dp.selection == brute->selection);
    const auto greedy = solve_mcp_greedy(inst);
    CHECK(greedy.profit <= dp.profit);
  }
  // the greedy value at budget 15 is a lower bound the exact solver meets
  CHECK(solve_mcp_exact(gsm_instance(gsm, "15")).profit >= Rational(11));
}

TEST_CASE("degenerate shapes") {
  SUBCASE("single group picks its best item that fits") {
    McpInstance inst;
    inst.budget = Rational(5);
    McpGroup g;
    g.id = "G";
    g.items = {{"cheap", {Rational(1)}, Rational(1)},
               {"rich", {Rational(9)}, Rational(9)},
               {"mid", {Rational(5)}, Rational(5)}};
    inst.groups.push_back(g);
    const auto sol = solve_mcp_exact(inst);
    CHECK(items_of(sol) == std::vector<std::string>{"mid"});
  }
  SUBCASE("zero budget with positive weights is infeasible") {
    McpInstance inst;
    inst.budget = Rational(0);
    McpGroup g;
    g.id = "G";
    g.items = {{"only", {Rational(1)}, Rational(2)}};
    inst.groups.push_back(g);
    CHECK_THROWS_AS(solve_mcp_exact(inst), infeasible_error);
    CHECK_THROWS_AS(solve_mcp_greedy(inst), infeasible_error);
  }
  SUBCASE("empty group is invalid") {
    McpInstance inst;
    inst.budget = Rational(1);
    inst.groups.push_back({"G", {}});
    CHECK_THROWS_AS(solve_mcp_exact(inst), validation_error);
  }
  SUBCASE("cell cap raises") {
    const auto gsm = load_fixture("gsm");
    CHECK_THROWS_AS(solve_mcp_exact(gsm_instance(gsm, "15"), 10), limit_error);
  }
}

TEST_CASE("exact equals brute force on random instances") {
  std::mt19937 rng(112233);
  for (int round = 0; round < 200; ++round) {
    const auto inst = testsupport::random_mcp(rng);
    const auto brute = testsupport::brute_mcp(inst);
    REQUIRE(brute.has_value());
    const auto dp = solve_mcp_exact(inst);
    CAPTURE(round);
    CHECK(dp.profit == brute->profit);
    CHECK(dp.weight == brute->weight);
    CHECK(dp.selection == brute->selection);
    const auto greedy = solve_mcp_greedy(inst);
    CHECK(greedy.profit <= dp.profit);
    CHECK(greedy.weight <= inst.budget);
  }
}

TEST_CASE("scalar multicriteria collapse") {
  const auto gsm = load_fixture("gsm");
  const auto inst = gsm_instance(gsm, "15");
  const auto frontier = solve_mcp_multicriteria(inst);
  REQUIRE(frontier.size() == 1);
  CHECK(frontier.front().profit.front() == solve_mcp_exact(inst).profit);
}

TEST_CASE("orthogonal profits produce a two-point frontier") {
  McpInstance inst;
  inst.budget = Rational(10);
  inst.groups.push_back({"G1",
                         {{"a", {Rational(1), Rational(0)}, Rational(1)},
                          {"b", {Rational(0), Rational(1)}, Rational(1)}}});
  inst.groups.push_back({"G2",
                         {{"c", {Rational(1), Rational(0)}, Rational(1)},
                          {"d", {Rational(0), Rational(1)}, Rational(1)}}});
  const auto frontier = solve_mcp_multicriteria(inst);
  CHECK(frontier.size() >= 2);
  CHECK(frontier == testsupport::brute_mcp_frontier(inst));
}

TEST_CASE("GSM multicriteria frontier equals the exhaustive filter") {
  const auto gsm = load_fixture("gsm");
  auto inst = gsm_instance(gsm, "15");
  // second profit component: the resource estimate itself (base - weight)
  for (auto& g : inst.groups)
    for (auto& it : g.items) it.profit.push_back(gsm.mcp->resource_base - it.weight);
  const auto fast = solve_mcp_multicriteria(inst);
  const auto slow = testsupport::brute_mcp_frontier(inst);
  REQUIRE(!fast.empty());
  CHECK(fast == slow);

  // the frontier is itself non-dominated (idempotent under filtering)
  for (const auto& p : fast)
    for (const auto& q : fast) {
      if (&p == &q) continue;
      bool geq = true, strict = false;
      for (std::size_t d = 0; d < p.profit.size(); ++d) {
        if (q.profit[d] < p.profit[d]) geq = false;
        if (q.profit[d] > p.profit[d]) strict = true;
      }
      const bool dominated = geq && strict;
      CHECK_FALSE(dominated);
    }
}

TEST_CASE("multicriteria frontier equals brute force on random vector instances") {
  std::mt19937 rng(445566);
  for (int round = 0; round < 100; ++round) {
    const auto inst = testsupport::random_mcp(rng, 3, 3, 2);
    CAPTURE(round);
    CHECK(solve_mcp_multicriteria(inst) == testsupport::brute_mcp_frontier(inst));
  }
}
