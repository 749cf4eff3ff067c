#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "morphsynth/enumerate.hpp"
#include "morphsynth/ideal_point.hpp"
#include "support/fixtures.hpp"
#include "support/gsm_golden.hpp"
#include "support/oracles.hpp"

using namespace morphsynth;
using testsupport::load_fixture;

namespace {

EstimateVector ev(std::initializer_list<int> xs) {
  EstimateVector v;
  for (int x : xs) v.components.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("proximity matches the published closeness values") {
  CHECK(proximity(ev({1, 1, 2, 2, 2}), ev({1, 1, 1, 1, 1}), Metric::l2) == doctest::Approx(1.7321).epsilon(1e-4));
  CHECK(proximity(ev({2, 1, 2, 2, 2}), ev({1, 1, 1, 1, 1}), Metric::l2) == doctest::Approx(2.0).epsilon(1e-9));
  for (auto metric : {Metric::l2, Metric::l1, Metric::chebyshev, Metric::hamming}) {
    CHECK(proximity(ev({3, 1, 4, 1, 5}), ev({3, 1, 4, 1, 5}), metric) == 0.0);
  }
  CHECK(proximity(ev({1, 4}), ev({3, 1}), Metric::l1) == 5.0);
  CHECK(proximity(ev({1, 4}), ev({3, 1}), Metric::chebyshev) == 3.0);
  CHECK(proximity(ev({1, 4}), ev({3, 4}), Metric::hamming) == 1.0);
  CHECK_THROWS_AS(proximity(ev({1, 2}), ev({1, 2, 3}), Metric::l2), validation_error);
}

TEST_CASE("ideal generation on the GSM fixture") {
  const auto gsm = load_fixture("gsm");
  const auto& m = gsm.morphology;
  const auto best_alts = generate_ideal(m, "S", IdealStrategy::best_of_alternatives);
  CHECK(best_alts.components == ev({1, 1, 1, 1, 1}).components);
  const auto best_scale = generate_ideal(m, "S", IdealStrategy::best_of_scale);
  CHECK(best_scale.components == ev({1, 1, 1, 1, 1}).components);

  const std::vector<Rational> expert{Rational(1), Rational(1), Rational(2), Rational(1), Rational(1)};
  const auto echoed = generate_ideal(m, "S", IdealStrategy::expert_supplied, VectorKeying::priority, expert);
  CHECK(echoed.components == expert);
  CHECK_THROWS_AS(
      generate_ideal(m, "S", IdealStrategy::expert_supplied, VectorKeying::priority,
                     std::vector<Rational>{Rational(1)}),
      validation_error);

  SUBCASE("criteria keying flattens the estimate tables") {
    const auto flat = generate_ideal(m, "S", IdealStrategy::best_of_alternatives, VectorKeying::criteria);
    CHECK(flat.components.size() == 21);
    CHECK(flat.components[0] == Rational::parse("4.1"));  // best first criterion of M
    // best_of_scale needs [a..b] notes, which only the reliability-style
    // criteria declare
    CHECK_THROWS_AS(generate_ideal(m, "S", IdealStrategy::best_of_scale, VectorKeying::criteria),
                    validation_error);
  }
}

TEST_CASE("demo fixture: ideal composition and closest admissible") {
  const auto demo = load_fixture("ma_demo");
  const auto& m = demo.morphology;
  // the marked best alternatives are X1_1, X2_3, X3_3, so the priority
  // ideal is all ones
  const auto ideal = generate_ideal(m, "S", IdealStrategy::best_of_alternatives);
  CHECK(ideal.components == std::vector<Rational>{Rational(1), Rational(1), Rational(1)});
  const auto ranked = select_closest(enumerate_admissible(m, "S"), m, ideal, Metric::l2);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked.front().composition.da_ids() == std::vector<std::string>{"X1_5", "X2_3", "X3_3"});
  CHECK(ranked.front().rho == doctest::Approx(1.0));
  CHECK(ranked[1].rho == doctest::Approx(std::sqrt(2.0)));
  CHECK(ranked[2].rho == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("all 45 published solutions reproduce their vectors and closeness") {
  const auto gsm = load_fixture("gsm");
  const auto& m = gsm.morphology;
  const auto solutions = testsupport::gsm::published_45();
  const auto& golden = testsupport::gsm::estimate_rows();
  const auto ideal = ev({1, 1, 1, 1, 1});
  REQUIRE(solutions.size() == 45);
  for (std::size_t i = 0; i < 45; ++i) {
    const auto v = composition_vector(m, solutions[i], VectorKeying::priority);
    for (int t = 0; t < 5; ++t) CHECK(v.components[t] == Rational(golden[i].vector[t]));
    CHECK(proximity(v, ideal, Metric::l2) == doctest::Approx(golden[i].rho).epsilon(1e-4));
  }
}

TEST_CASE("select_closest over the 45: best and runners-up") {
  const auto gsm = load_fixture("gsm");
  const auto& m = gsm.morphology;
  const auto ranked = select_closest(testsupport::gsm::published_45(), m, ev({1, 1, 1, 1, 1}), Metric::l2);
  REQUIRE(ranked.size() == 45);
  CHECK(ranked.front().composition.da_ids() == std::vector<std::string>{"M4", "L2", "V2", "U3", "T4"});
  CHECK(ranked.front().rho == doctest::Approx(1.7321).epsilon(1e-4));
  CHECK_FALSE(ranked.front().tied);
  std::multiset<std::vector<std::string>> runners;
  for (std::size_t i = 1; i < ranked.size() && ranked[i].rho <= 2.0 + 1e-9; ++i) {
    CHECK(ranked[i].rho == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(ranked[i].tied);
    runners.insert(ranked[i].composition.da_ids());
  }
  CHECK(runners.size() == 6);
  CHECK(runners.count({"M1", "L1", "V2", "U3", "T4"}) == 1);   // S19
  CHECK(runners.count({"M1", "L4", "V2", "U3", "T4"}) == 1);   // S20
  CHECK(runners.count({"M4", "L3", "V2", "U3", "T4"}) == 1);   // S24
  CHECK(runners.count({"M5", "L1", "V2", "U3", "T4"}) == 1);   // S25
  CHECK(runners.count({"M5", "L2", "V2", "U3", "T4"}) == 1);   // S26
  CHECK(runners.count({"M5", "L4", "V2", "U3", "T4"}) == 1);   // S27
}

TEST_CASE("multiple ideal points: union of per-ideal minimizers") {
  const auto gsm = load_fixture("gsm");
  const auto& m = gsm.morphology;
  EnumerateOptions opt;
  opt.min_level = 3;
  const auto candidates = enumerate_admissible(m, "S", opt);
  const std::vector<EstimateVector> ideals{ev({1, 1, 1, 1, 1}), ev({3, 2, 3, 3, 2})};
  std::set<std::vector<std::string>> minimizers;
  for (const auto& ideal : ideals) {
    const auto ranked = select_closest(candidates, m, ideal, Metric::l2);
    for (const auto& r : ranked) {
      if (r.rho > ranked.front().rho) break;
      minimizers.insert(r.composition.da_ids());
    }
  }
  // the first ideal selects the two vectors at sqrt(3); the second sits on
  // an admissible vector, so its minimizers join at distance zero
  CHECK(minimizers.count({"M4", "L2", "V2", "U3", "T4"}) == 1);
  CHECK(minimizers.size() > 2);
}

TEST_CASE("a single alternative per part forces the ideal") {
  Morphology m;
  m.k = 3;
  m.l = 3;
  m.root.id = "S";
  for (const char* pid : {"P", "Q"}) {
    SystemNode leaf;
    leaf.id = pid;
    m.root.children.push_back(leaf);
    Part p;
    p.id = pid;
    DesignAlternative da;
    da.id = std::string(pid) + "1";
    da.part_id = pid;
    da.priority = 2;
    p.alternatives.push_back(da);
    m.parts.push_back(p);
  }
  validate_morphology(m);
  const auto ideal = generate_ideal(m, "S", IdealStrategy::best_of_alternatives);
  const auto unique = enumerate_admissible(m, "S");
  REQUIRE(unique.size() == 1);
  CHECK(ideal.components == composition_vector(m, unique.front(), VectorKeying::priority).components);
}

TEST_CASE("degenerate candidate sets") {
  const auto toy = load_fixture("toy_xyz");
  const auto& m = toy.morphology;
  const auto all = enumerate_admissible(m, "S");
  REQUIRE(!all.empty());
  const auto ideal = composition_vector(m, all.front(), VectorKeying::priority);

  SUBCASE("singleton candidate set returns it regardless of distance") {
    const auto ranked = select_closest({all.back()}, m, ideal, Metric::l2);
    CHECK(ranked.size() == 1);
  }
  SUBCASE("identical candidates keep input order at distance zero") {
    const std::vector<Composition> same{all.front(), all.front(), all.front()};
    const auto ranked = select_closest(same, m, ideal, Metric::l2);
    for (const auto& r : ranked) {
      CHECK(r.rho == 0.0);
      CHECK(r.tied);
    }
  }
  SUBCASE("empty candidate set raises") {
    CHECK_THROWS_AS(select_closest({}, m, ideal, Metric::l2), validation_error);
  }
}

TEST_CASE("random candidates: minimizer set equals brute force, shifts preserve order") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> shift_d(1, 5);
  for (int round = 0; round < 60; ++round) {
    const auto m = testsupport::random_flat_morphology(rng);
    const auto candidates = testsupport::all_compositions(m, "S");
    if (candidates.size() > 1000) continue;
    const auto ideal = generate_ideal(m, "S", IdealStrategy::best_of_scale);
    for (auto metric : {Metric::l2, Metric::l1, Metric::chebyshev, Metric::hamming}) {
      const auto ranked = select_closest(candidates, m, ideal, metric);
      double best = ranked.front().rho;
      std::set<std::vector<std::string>> got;
      for (const auto& r : ranked)
        if (r.rho == best) got.insert(r.composition.da_ids());
      std::set<std::vector<std::string>> expected;
      double best_direct = 1e18;
      for (const auto& c : candidates) {
        const double d = proximity(composition_vector(m, c, VectorKeying::priority), ideal, metric);
        if (d < best_direct - 1e-12) {
          best_direct = d;
          expected.clear();
        }
        if (std::abs(d - best_direct) <= 1e-12) expected.insert(c.da_ids());
      }
      CHECK(got == expected);
    }

    // shifting every component of ideal and candidates leaves the order
    // unchanged for the translation-invariant metrics
    const int shift = shift_d(rng);
    Morphology shifted = m;
    for (auto& p : shifted.parts)
      for (auto& a : p.alternatives) a.priority = *a.priority + shift;
    shifted.k = m.k + shift;
    validate_morphology(shifted);
    EstimateVector ideal_shifted = ideal;
    for (auto& x : ideal_shifted.components) x += Rational(shift);
    const auto shifted_candidates = testsupport::all_compositions(shifted, "S");
    for (auto metric : {Metric::l2, Metric::l1, Metric::chebyshev}) {
      const auto base = select_closest(candidates, m, ideal, metric);
      const auto moved = select_closest(shifted_candidates, shifted, ideal_shifted, metric);
      REQUIRE(base.size() == moved.size());
      for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(base[i].composition.da_ids() == moved[i].composition.da_ids());
    }
  }
}
