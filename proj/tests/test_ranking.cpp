#include <doctest.h>

#include <iostream>
#include <random>

#include "morphsynth/ranking.hpp"
#include "support/fixtures.hpp"

using namespace morphsynth;
using testsupport::load_fixture;

namespace {

Part make_part(std::vector<std::vector<int>> rows, std::vector<Direction> dirs) {
  Part p;
  p.id = "P";
  const std::size_t ncrit = rows.front().size();
  for (std::size_t c = 0; c < ncrit; ++c)
    p.criteria.push_back({"c" + std::to_string(c + 1), Rational(1, static_cast<std::int64_t>(ncrit)), dirs[c], ""});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    DesignAlternative da;
    da.id = "a" + std::to_string(i + 1);
    da.part_id = "P";
    for (std::size_t c = 0; c < ncrit; ++c) da.estimates.emplace_back(p.criteria[c].id, Rational(rows[i][c]));
    p.alternatives.push_back(std::move(da));
  }
  return p;
}

bool weakly_dominates(const Part& p, const DesignAlternative& a, const DesignAlternative& b) {
  bool strict = false;
  for (const auto& c : p.criteria) {
    const Rational va = c.direction == Direction::maximize ? a.estimate(c.id) : -a.estimate(c.id);
    const Rational vb = c.direction == Direction::maximize ? b.estimate(c.id) : -b.estimate(c.id);
    if (va < vb) return false;
    if (va > vb) strict = true;
  }
  return strict;
}

void check_dominance_consistency(const Part& p, const std::map<std::string, int>& prio) {
  for (const auto& a : p.alternatives)
    for (const auto& b : p.alternatives)
      if (weakly_dominates(p, a, b)) CHECK(prio.at(a.id) <= prio.at(b.id));
}

}  // namespace

TEST_CASE("singleton part ranks 1") {
  const auto p = make_part({{5, 5}}, {Direction::maximize, Direction::maximize});
  for (auto method : {RankingMethod::dominance_layers, RankingMethod::weighted_outranking}) {
    RankingConfig cfg;
    cfg.method = method;
    const auto r = rank_alternatives(p, cfg);
    CHECK(r.at("a1") == 1);
  }
}

TEST_CASE("total dominance chain ranks 1,2,3 under dominance layers") {
  const auto p = make_part({{3, 3}, {2, 2}, {1, 1}}, {Direction::maximize, Direction::maximize});
  RankingConfig cfg;
  const auto r = rank_alternatives(p, cfg);
  CHECK(r.at("a1") == 1);
  CHECK(r.at("a2") == 2);
  CHECK(r.at("a3") == 3);
}

TEST_CASE("ties inside a layer share the priority") {
  const auto p = make_part({{3, 1}, {1, 3}, {0, 0}}, {Direction::maximize, Direction::maximize});
  RankingConfig cfg;
  const auto r = rank_alternatives(p, cfg);
  CHECK(r.at("a1") == 1);
  CHECK(r.at("a2") == 1);
  CHECK(r.at("a3") == 2);
}

TEST_CASE("layers beyond k collapse into k") {
  const auto p = make_part({{4}, {3}, {2}, {1}}, {Direction::maximize});
  RankingConfig cfg;
  cfg.k = 3;
  const auto r = rank_alternatives(p, cfg);
  CHECK(r.at("a1") == 1);
  CHECK(r.at("a2") == 2);
  CHECK(r.at("a3") == 3);
  CHECK(r.at("a4") == 3);
}

TEST_CASE("config validation") {
  const auto p = make_part({{1}}, {Direction::maximize});
  RankingConfig cfg;
  cfg.concordance_threshold = Rational(1, 2);
  CHECK_THROWS_AS(rank_alternatives(p, cfg), validation_error);
  cfg.concordance_threshold = Rational(11, 10);
  CHECK_THROWS_AS(rank_alternatives(p, cfg), validation_error);
  cfg = RankingConfig{};
  cfg.k = 0;
  CHECK_THROWS_AS(rank_alternatives(p, cfg), validation_error);

  Part missing = p;
  missing.alternatives.front().estimates.clear();
  CHECK_THROWS_AS(rank_alternatives(missing, RankingConfig{}), validation_error);
}

TEST_CASE("published part M: outranking output is dominance-consistent") {
  const auto gsm = load_fixture("gsm");
  const auto& part = gsm.morphology.part("M");
  RankingConfig cfg;
  cfg.method = RankingMethod::weighted_outranking;
  const auto computed = rank_alternatives(part, cfg);
  check_dominance_consistency(part, computed);

  // informational comparison against the declared column; the published
  // ranking came from a different outranking variant and is not asserted
  std::cout << "part M priorities (computed vs declared):";
  for (const auto& a : part.alternatives)
    std::cout << " " << a.id << ":" << computed.at(a.id) << "/" << *a.priority;
  std::cout << "\n";

  cfg.method = RankingMethod::dominance_layers;
  check_dominance_consistency(part, rank_alternatives(part, cfg));
}

TEST_CASE("dominance layers are invariant under positive affine rescaling") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> n_d(1, 6), v_d(0, 9), c_d(2, 4), dir_d(0, 1);
  for (int round = 0; round < 100; ++round) {
    const int ncrit = c_d(rng);
    std::vector<Direction> dirs;
    for (int c = 0; c < ncrit; ++c) dirs.push_back(dir_d(rng) ? Direction::maximize : Direction::minimize);
    std::vector<std::vector<int>> rows(n_d(rng), std::vector<int>(ncrit));
    for (auto& r : rows)
      for (auto& x : r) x = v_d(rng);
    const auto p = make_part(rows, dirs);
    RankingConfig cfg;
    cfg.k = 9;
    const auto base = rank_alternatives(p, cfg);
    check_dominance_consistency(p, base);

    // rescale one criterion: x -> 3x + 7
    Part scaled = p;
    const std::size_t target = static_cast<std::size_t>(round) % static_cast<std::size_t>(ncrit);
    for (auto& da : scaled.alternatives) {
      auto& [cid, value] = da.estimates[target];
      value = value * Rational(3) + Rational(7);
    }
    CHECK(rank_alternatives(scaled, cfg) == base);
  }
}

TEST_CASE("outranking output is dominance-consistent on random parts") {
  std::mt19937 rng(78);
  std::uniform_int_distribution<int> n_d(2, 6), v_d(0, 5), c_d(2, 4);
  for (int round = 0; round < 100; ++round) {
    const int ncrit = c_d(rng);
    std::vector<std::vector<int>> rows(n_d(rng), std::vector<int>(ncrit));
    for (auto& r : rows)
      for (auto& x : r) x = v_d(rng);
    const auto p = make_part(rows, std::vector<Direction>(ncrit, Direction::maximize));
    RankingConfig cfg;
    cfg.method = RankingMethod::weighted_outranking;
    cfg.k = 9;
    const auto prio = rank_alternatives(p, cfg);
    check_dominance_consistency(p, prio);
    int min_prio = 99;
    for (const auto& [id, r] : prio) min_prio = std::min(min_prio, r);
    CHECK(min_prio == 1);  // priorities form a range starting at 1
  }
}
