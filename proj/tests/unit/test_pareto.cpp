#include <doctest.h>

#include <random>
#include <set>

#include "noregret/errors.hpp"
#include "noregret/pareto.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace noregret;
using namespace noregret::testing;

namespace {

std::set<IdSet> id_sets(const std::vector<UtilityPoint>& pts) {
  std::set<IdSet> out;
  for (const auto& p : pts) out.insert(p.selection.ids());
  return out;
}

std::set<IdSet> id_sets(const std::vector<Selection>& sels) {
  std::set<IdSet> out;
  for (const auto& s : sels) out.insert(s.ids());
  return out;
}

std::set<IdSet> minus(const std::set<IdSet>& a, const std::set<IdSet>& b) {
  std::set<IdSet> out;
  for (const auto& x : a) {
    if (!b.count(x)) out.insert(x);
  }
  return out;
}

UtilityPoint point(const Population& pop, const Objective& obj, std::size_t i,
                   std::vector<Rational> v) {
  return {Selection::make(pop, obj, std::vector<std::size_t>{i}), std::move(v)};
}

}  // namespace

TEST_SUITE("pareto-analysis") {
  TEST_CASE("fronts of the fifteen student pairs") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto pts = utility_points(pop, obj, 2);
    REQUIRE(pts.size() == 15);

    const auto cpf = id_sets(convex_pareto_front(pts).points);
    const auto pf = id_sets(pareto_front(pts));
    const auto wpf = id_sets(weak_pareto_front(pts));
    CHECK(cpf == std::set<IdSet>{{"A", "I"}, {"A", "Z"}, {"B", "Z"}, {"B", "E"}});
    CHECK(minus(pf, cpf) == std::set<IdSet>{{"A", "B"}, {"B", "I"}, {"I", "Z"}});
    // {Amy, Max} = (17, 19) shares Amy+Isa's grade total, so nothing beats it
    // strictly in both coordinates.
    CHECK(minus(wpf, pf) == std::set<IdSet>{{"E", "Z"}, {"A", "M"}});
    CHECK(minus(id_sets(pts), wpf) ==
          std::set<IdSet>{{"A", "E"}, {"E", "I"}, {"B", "M"}, {"E", "M"}, {"I", "M"}, {"M", "Z"}});
  }

  TEST_CASE("single admissions: Isa is Pareto optimal but never weighted-optimal") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto pts = utility_points(pop, obj, 1);
    CHECK(id_sets(pareto_front(pts)) == std::set<IdSet>{{"A"}, {"B"}, {"I"}, {"Z"}});
    CHECK(id_sets(weak_pareto_front(pts)) == std::set<IdSet>{{"A"}, {"B"}, {"I"}, {"Z"}, {"E"}});
    const auto cpf = id_sets(convex_pareto_front(pts).points);
    CHECK(cpf == std::set<IdSet>{{"A"}, {"B"}, {"Z"}});
    CHECK_FALSE(cpf.count({"I"}));
  }

  TEST_CASE("small edge cases") {
    Schema schema{{{"x", Rational(1)}, {"y", Rational(1)}}, "g"};
    Population pop(schema, {{"1", {0, 0}, "a", ""}, {"2", {0, 0}, "a", ""}, {"3", {0, 0}, "b", ""}});
    const auto obj = Objective::bind(ObjectiveSpec::linear({"x", "y"}), pop.schema());

    const std::vector<UtilityPoint> single = {point(pop, obj, 0, {Rational(1), Rational(2)})};
    CHECK(pareto_front(single).size() == 1);
    CHECK(convex_pareto_front(single).points.size() == 1);

    const std::vector<UtilityPoint> same = {point(pop, obj, 0, {Rational(1), Rational(1)}),
                                            point(pop, obj, 1, {Rational(1), Rational(1)}),
                                            point(pop, obj, 2, {Rational(1), Rational(1)})};
    CHECK(weak_pareto_front(same).size() == 3);
    CHECK(pareto_front(same).size() == 3);

    const std::vector<UtilityPoint> pair = {point(pop, obj, 0, {Rational(3), Rational(0)}),
                                            point(pop, obj, 1, {Rational(0), Rational(3)})};
    CHECK(convex_pareto_front(pair).points.size() == 2);

    // midpoint of an edge ties for the edge normal
    const std::vector<UtilityPoint> collinear = {point(pop, obj, 0, {Rational(2), Rational(0)}),
                                                 point(pop, obj, 1, {Rational(1), Rational(1)}),
                                                 point(pop, obj, 2, {Rational(0), Rational(2)})};
    CHECK(convex_pareto_front(collinear).points.size() == 3);

    const std::vector<UtilityPoint> ragged = {point(pop, obj, 0, {Rational(2)}),
                                              point(pop, obj, 1, {Rational(1), Rational(1)})};
    CHECK_THROWS_AS(pareto_front(ragged), ArgumentError);
  }

  TEST_CASE("three objectives: sampled convex front is a sound subset") {
    std::mt19937_64 rng(4);
    const auto pop = random_population(rng, 7, 3);
    const auto obj = Objective::bind(ObjectiveSpec::linear({"a0", "a1", "a2"}), pop.schema());
    const auto pts = utility_points(pop, obj, 2);
    const auto front = convex_pareto_front(pts, {512, 3});
    CHECK(front.approximate);
    const auto pf = id_sets(pareto_front(pts));
    for (const auto& ids : id_sets(front.points)) CHECK(pf.count(ids));
    CHECK_FALSE(front.points.empty());
  }

  TEST_CASE("front report on the student example") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto report = front_report(pop, obj, ThetaDomain::interval(Q("1/3"), Q("2/3")), 2,
                                     gender_mismatch());
    CHECK(id_sets(report.fairest) == std::set<IdSet>{{"A", "Z"}});
    CHECK(id_sets(report.optimal_set) == std::set<IdSet>{{"A", "Z"}, {"B", "Z"}});
    CHECK(report.convex_front.size() == 4);
    CHECK(report.pareto_front.size() == 7);
    CHECK(report.weak_front.size() == 9);
    CHECK(report.solution_space.size() == 15);
    CHECK(report.all_strict());

    CHECK_THROWS_AS(front_report(pop, iq_grade_linear(pop), ThetaDomain::hull({{Q("1"), Q("1")}}),
                                 2, gender_mismatch()),
                    ArgumentError);
  }

  TEST_CASE("front report degenerates when the solution space is a single set") {
    Schema schema{{{"x", Rational(1)}, {"y", Rational(1)}}, "g"};
    Population pop(schema, {{"solo", {4, 5}, "a", ""}});
    const auto obj = Objective::bind(ObjectiveSpec::two_attribute("x", "y"), pop.schema());
    FairnessSpec fair{MismatchFairness{{"a", "a"}}, std::nullopt};
    const auto report = front_report(pop, obj, ThetaDomain::interval(0, 1), 1, fair);
    for (const auto& link : report.links) {
      CHECK(link.included);
      CHECK_FALSE(link.strict);
    }
  }

  TEST_CASE("property: fronts agree with brute force on random instances") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng() % 9;
      const std::size_t k = 1 + rng() % n;
      const auto pop = random_population(rng, n, 2);
      const auto obj = Objective::bind(ObjectiveSpec::two_attribute("a0", "a1"), pop.schema());
      const auto pts = utility_points(pop, obj, k);
      const auto brute = brute_points(pop, {"a0", "a1"}, k);
      const auto cpf = id_sets(convex_pareto_front(pts).points);
      const auto pf = id_sets(pareto_front(pts));
      const auto wpf = id_sets(weak_pareto_front(pts));
      CHECK(pf == brute_pareto(brute, false));
      CHECK(wpf == brute_pareto(brute, true));
      CHECK(cpf == brute_convex_front(brute));
      // chain
      for (const auto& ids : cpf) CHECK(pf.count(ids));
      for (const auto& ids : pf) CHECK(wpf.count(ids));
      const auto entries = enumerate_optimal_set(pop, obj, ThetaDomain::interval(Q("0.1"), Q("0.9")), k);
      for (const auto& e : entries) CHECK(cpf.count(e.selection.ids()));
    }
  }

  TEST_CASE("property: weighted-sum optima are Pareto optimal") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const auto pop = random_population(rng, 8, 2);
      const std::size_t k = 1 + rng() % 4;
      const auto obj = Objective::bind(ObjectiveSpec::linear({"a0", "a1"}), pop.schema());
      const auto pf = id_sets(pareto_front(utility_points(pop, obj, k)));
      for (int probe = 0; probe < 50; ++probe) {
        const ThetaPoint theta{Rational(static_cast<long long>(1 + rng() % 50), 7),
                               Rational(static_cast<long long>(1 + rng() % 50), 3)};
        for (const auto& s : top_k(pop, obj, theta, k)) CHECK(pf.count(s.ids()));
      }
    }
  }

  TEST_CASE("convex front is the limit of the theta-optimal set") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    std::set<IdSet> enumerated;
    for (const auto& e : enumerate_optimal_set(pop, obj, ThetaDomain::interval(Q("0.01"), Q("0.99")), 2)) {
      enumerated.insert(e.selection.ids());
    }
    CHECK(enumerated == id_sets(convex_pareto_front(utility_points(pop, obj, 2)).points));
  }
}
