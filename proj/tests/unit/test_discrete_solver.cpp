#include <doctest.h>

#include <random>
#include <set>

#include "noregret/discrete_solver.hpp"
#include "noregret/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace noregret;
using namespace noregret::testing;

namespace {

std::set<IdSet> id_sets(const std::vector<Selection>& sels) {
  std::set<IdSet> out;
  for (const auto& s : sels) out.insert(s.ids());
  return out;
}

std::set<IdSet> id_sets(const std::vector<OptimalSetEntry>& entries) {
  std::set<IdSet> out;
  for (const auto& e : entries) out.insert(e.selection.ids());
  return out;
}

const OptimalSetEntry& entry_for(const std::vector<OptimalSetEntry>& entries, const IdSet& ids) {
  for (const auto& e : entries) {
    if (e.selection.ids() == ids) return e;
  }
  FAIL("missing entry");
  return entries.front();
}

}  // namespace

TEST_SUITE("discrete-solver") {
  TEST_CASE("top_k on the student example") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    CHECK(id_sets(top_k(pop, obj, {Q("0.5")}, 2)) == std::set<IdSet>{{"B", "Z"}});
    // θ = 3/8: Amy and Bob tie at 10 behind Zac at 10.25
    CHECK(id_sets(top_k(pop, obj, {Q("3/8")}, 2)) == std::set<IdSet>{{"A", "Z"}, {"B", "Z"}});
    CHECK(id_sets(top_k(pop, obj, {Q("0.2")}, 6)) ==
          std::set<IdSet>{{"A", "B", "E", "I", "M", "Z"}});
    CHECK_THROWS_AS(top_k(pop, obj, {Q("0.5")}, 0), ArgumentError);
    CHECK_THROWS_AS(top_k(pop, obj, {Q("0.5")}, 7), ArgumentError);
  }

  TEST_CASE("quota-constrained optimum") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto fair = quota_constrained_optimum(pop, obj, {Q("0.5")}, 2, women_quota("0.3"));
    CHECK(id_sets(fair) == std::set<IdSet>{{"A", "B"}, {"A", "Z"}, {"B", "E"},
                                           {"B", "I"}, {"E", "Z"}, {"I", "Z"}});
    for (const auto& s : fair) CHECK(score_selection(s, obj, {Q("0.5")}) == 21);

    CHECK(id_sets(quota_constrained_optimum(pop, obj, {Q("0.5")}, 2, women_quota("0"))) ==
          id_sets(top_k(pop, obj, {Q("0.5")}, 2)));
    // all-female pairs tie three ways at 20
    CHECK(id_sets(quota_constrained_optimum(pop, obj, {Q("0.5")}, 2, women_quota("1"))) ==
          std::set<IdSet>{{"A", "E"}, {"A", "I"}, {"E", "I"}});
    // four women cannot be admitted with k = 4 and a 100% quota
    CHECK_THROWS_AS(quota_constrained_optimum(pop, obj, {Q("0.5")}, 4, women_quota("1")),
                    InfeasibleError);
  }

  TEST_CASE("regret") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto r = regret(pop, obj, {Q("0.5")}, 2, women_quota("0.3"));
    CHECK(r.optimal_utility == 22);
    CHECK(r.fair_utility == 21);
    CHECK(r.regret == 1);
    CHECK(regret(pop, obj, {Q("0.5")}, 2, women_quota("0")).regret == 0);
    CHECK(regret(pop, obj, {Q("0.35")}, 2, women_quota("0.3")).regret == 0);
    CHECK_THROWS_AS(regret(pop, obj, {Q("0.5")}, 4, women_quota("1")), InfeasibleError);
  }

  TEST_CASE("crossing points") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto all = crossing_points(pop, obj, ThetaDomain::interval(0, 1));
    const std::vector<Rational> expected = {Q("0"),   Q("1/8"), Q("1/5"), Q("1/4"), Q("1/3"),
                                            Q("3/8"), Q("1/2"), Q("3/4"), Q("1")};
    CHECK(all == expected);

    Schema schema{{{"x", Rational(1)}, {"y", Rational(1)}}, "g"};
    Population twins(schema, {{"1", {3, 4}, "a", ""}, {"2", {3, 4}, "b", ""}});
    const auto tobj = Objective::bind(ObjectiveSpec::two_attribute("x", "y"), twins.schema());
    CHECK(crossing_points(twins, tobj, ThetaDomain::interval(0, 1)).empty());

    const auto inner = ThetaDomain::interval(Q("1/3"), Q("2/3"));
    const auto entries = enumerate_optimal_set(pop, obj, inner, 2);
    CHECK(change_points(entries, inner) == std::vector<Rational>{Q("3/8")});
  }

  TEST_CASE("enumerate_optimal_set over [1/3, 2/3]") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto entries = enumerate_optimal_set(pop, obj, ThetaDomain::interval(Q("1/3"), Q("2/3")), 2);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].selection.ids() == IdSet{"A", "Z"});
    CHECK(*entries[0].region == Interval{Q("1/3"), Q("3/8")});
    CHECK(entries[1].selection.ids() == IdSet{"B", "Z"});
    CHECK(*entries[1].region == Interval{Q("3/8"), Q("2/3")});
  }

  TEST_CASE("enumerate_optimal_set over wider domains") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto wide = enumerate_optimal_set(pop, obj, ThetaDomain::interval(Q("0.01"), Q("0.99")), 2);
    CHECK(id_sets(wide) == std::set<IdSet>{{"A", "I"}, {"A", "Z"}, {"B", "Z"}, {"B", "E"}});
    CHECK(*entry_for(wide, {"A", "I"}).region == Interval{Q("0.01"), Q("1/4")});
    CHECK(*entry_for(wide, {"B", "E"}).region == Interval{Q("3/4"), Q("0.99")});

    // Closed Θ: at θ = 0 Isa and Max tie, so {Amy, Max} is optimal at that point only.
    const auto full = enumerate_optimal_set(pop, obj, ThetaDomain::interval(0, 1), 2);
    CHECK(*entry_for(full, {"A", "M"}).region == Interval{Q("0"), Q("0")});
    CHECK(change_points(full, ThetaDomain::interval(0, 1)) ==
          std::vector<Rational>{Q("1/4"), Q("3/8"), Q("3/4")});

    const auto point = enumerate_optimal_set(pop, obj, ThetaDomain::point(Q("0.35")), 2);
    CHECK(id_sets(point) == id_sets(top_k(pop, obj, {Q("0.35")}, 2)));
    CHECK(point.size() == 1);

    CHECK_THROWS_AS(enumerate_optimal_set(pop, iq_grade_linear(pop),
                                          ThetaDomain::hull({{Q("1"), Q("1")}}), 2),
                    ArgumentError);
  }

  TEST_CASE("sample_optimal_set") {
    const auto pop = students();
    const auto obj = iq_grade_linear(pop);
    const auto hull = ThetaDomain::hull({{Q("1/3"), Q("2/3")}, {Q("2/3"), Q("1/3")}});
    const auto sampled = sample_optimal_set(pop, obj, hull, 2, 200, 42);
    CHECK(id_sets(sampled) == std::set<IdSet>{{"A", "Z"}, {"B", "Z"}});
    for (const auto& e : sampled) {
      CHECK(e.approximate);
      for (const auto& w : e.witnesses) CHECK(id_sets(top_k(pop, obj, w, 2)).count(e.selection.ids()));
    }

    const auto one = sample_optimal_set(pop, obj, hull, 2, 1, 42);
    CHECK(id_sets(one) == id_sets(top_k(pop, obj, sample_theta(hull, 1, 42).front(), 2)));

    const auto vertex = ThetaDomain::hull({{Q("1"), Q("3")}});
    CHECK(id_sets(sample_optimal_set(pop, obj, vertex, 2, 25, 3)) ==
          id_sets(top_k(pop, obj, {Q("1"), Q("3")}, 2)));

    const auto box = ThetaDomain::box({Q("1"), Q("1")}, {Q("2"), Q("3")});
    for (const auto& theta : sample_theta(box, 50, 9)) CHECK(box.contains(theta));
    CHECK(sample_theta(box, 20, 5) == sample_theta(box, 20, 5));

    CHECK_THROWS_AS(sample_optimal_set(pop, iq_grade(pop), ThetaDomain::interval(0, 1), 2, 10, 1),
                    ArgumentError);
    CHECK_THROWS_AS(sample_optimal_set(pop, obj, hull, 2, 0, 1), ArgumentError);
  }

  TEST_CASE("fairest_optimal") {
    const auto pop = students();
    const auto obj = iq_grade(pop);
    const auto fair = gender_mismatch();
    const auto entries = enumerate_optimal_set(pop, obj, ThetaDomain::interval(Q("1/3"), Q("2/3")), 2);
    const auto best = fairest_optimal(entries, fair);
    CHECK(best.winner.ids() == IdSet{"A", "Z"});
    CHECK(best.fairness == 0);
    CHECK(*best.region == Interval{Q("1/3"), Q("3/8")});
    CHECK(best.region->contains(Q("0.35")));
    CHECK(best.theta_star == ThetaPoint{Q("17/48")});
    CHECK(best.tied.size() == 1);

    CHECK(fairest_optimal({entries[1]}, fair).winner.ids() == IdSet{"B", "Z"});
    CHECK_THROWS_AS(fairest_optimal({}, fair), ArgumentError);

    const auto wide = enumerate_optimal_set(pop, obj, ThetaDomain::interval(Q("0.01"), Q("0.99")), 2);
    const auto wbest = fairest_optimal(wide, fair);
    // {Bob, Eve} is also one man and one woman; the earlier region wins the tie.
    CHECK(wbest.winner.ids() == IdSet{"A", "Z"});
    REQUIRE(wbest.tied.size() == 2);
    CHECK(wbest.tied[1].selection.ids() == IdSet{"B", "E"});
    CHECK(fairness_score(entry_for(wide, {"A", "I"}).selection, fair) == -2);
    CHECK(fairness_score(entry_for(wide, {"B", "Z"}).selection, fair) == -2);
  }

  TEST_CASE("fairest_optimal secondary tie-break toward a preferred theta") {
    // Two mixed pairs optimal on different sub-intervals.
    Schema schema{{{"x", Rational(1)}, {"y", Rational(1)}}, "g"};
    Population pop(schema, {{"a", {10, 0}, "p", ""}, {"b", {0, 10}, "q", ""},
                            {"c", {0, 9}, "p", ""}, {"d", {9, 0}, "q", ""}});
    const auto obj = Objective::bind(ObjectiveSpec::two_attribute("x", "y"), pop.schema());
    FairnessSpec fair{MismatchFairness{{"p", "q"}}, std::nullopt};
    const auto entries = enumerate_optimal_set(pop, obj, ThetaDomain::interval(0, 1), 2);
    const auto plain = fairest_optimal(entries, fair);
    const auto near_one = fairest_optimal(entries, fair, {ThetaPoint{Q("1")}});
    CHECK(plain.tied.size() >= 2);
    CHECK(near_one.region->contains(Q("1")));
    CHECK(plain.winner.ids() != near_one.winner.ids());
  }

  TEST_CASE("property: top_k equals exhaustive argmax") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 2 + rng() % 9;
      const auto pop = random_population(rng, n, 2);
      const auto obj = Objective::bind(ObjectiveSpec::two_attribute("a0", "a1"), pop.schema());
      const std::size_t k = 1 + rng() % n;
      const Rational t(static_cast<long long>(rng() % 9), 8);
      CHECK(id_sets(top_k(pop, obj, {t}, k)) == brute_argmax(pop, {"a0", "a1"}, {t, 1 - t}, k));
    }
  }

  TEST_CASE("property: enumeration covers every theta and regions certify optimality") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const auto pop = random_population(rng, 7, 2);
      const auto obj = Objective::bind(ObjectiveSpec::two_attribute("a0", "a1"), pop.schema());
      const std::size_t k = 1 + rng() % 4;
      const auto domain = ThetaDomain::interval(Q("0.1"), Q("0.9"));
      const auto entries = enumerate_optimal_set(pop, obj, domain, k);
      const auto listed = id_sets(entries);
      for (int probe = 0; probe < 100; ++probe) {
        const Rational t = Q("0.1") + Rational(static_cast<long long>(rng() % 100001), 125000);
        const auto opt = brute_argmax(pop, {"a0", "a1"}, {t, 1 - t}, k);
        for (const auto& ids : opt) CHECK(listed.count(ids));
        for (const auto& e : entries) {
          if (e.region->contains(t)) CHECK(opt.count(e.selection.ids()));
        }
      }
      // region endpoints are exact certificates too
      for (const auto& e : entries) {
        for (const auto& t : {e.region->lo, e.region->hi}) {
          CHECK(brute_argmax(pop, {"a0", "a1"}, {t, 1 - t}, k).count(e.selection.ids()));
        }
      }
    }
  }

  TEST_CASE("property: winners are optimal at their reported theta") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const auto pop = random_population(rng, 8, 2);
      const auto obj = Objective::bind(ObjectiveSpec::two_attribute("a0", "a1"), pop.schema());
      const std::size_t k = 1 + rng() % 5;
      FairnessSpec fair{MismatchFairness{{"p", "q"}}, std::nullopt};
      const auto entries = enumerate_optimal_set(pop, obj, ThetaDomain::interval(Q("0.2"), Q("0.8")), k);
      const auto best = fairest_optimal(entries, fair);
      CHECK(id_sets(top_k(pop, obj, best.theta_star, k)).count(best.winner.ids()));
      for (const auto& e : entries) CHECK(fairness_score(e.selection, fair) <= best.fairness);
    }
  }

  TEST_CASE("property: widening theta grows the optimal set and max fairness") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const auto pop = random_population(rng, 8, 2);
      const auto obj = Objective::bind(ObjectiveSpec::two_attribute("a0", "a1"), pop.schema());
      const std::size_t k = 2 + rng() % 3;
      FairnessSpec fair{MismatchFairness{{"p", "q"}}, std::nullopt};
      const Rational lo(static_cast<long long>(2 + rng() % 3), 10);
      const Rational hi(static_cast<long long>(5 + rng() % 3), 10);
      const auto narrow = enumerate_optimal_set(pop, obj, ThetaDomain::interval(lo, hi), k);
      const auto wide = enumerate_optimal_set(pop, obj, ThetaDomain::interval(lo / 2, (hi + 1) / 2), k);
      const auto wide_ids = id_sets(wide);
      for (const auto& ids : id_sets(narrow)) CHECK(wide_ids.count(ids));
      CHECK(fairest_optimal(narrow, fair).fairness <= fairest_optimal(wide, fair).fairness);
    }
  }

  TEST_CASE("regret is never negative and quota winners satisfy the quota") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
      const auto pop = random_population(rng, 7, 2);
      const auto obj = Objective::bind(ObjectiveSpec::two_attribute("a0", "a1"), pop.schema());
      const std::size_t k = 1 + rng() % 3;
      FairnessSpec quota{std::nullopt, QuotaFairness{"p", Rational(1, 3)}};
      const auto r = regret(pop, obj, {Rational(static_cast<long long>(rng() % 5), 4)}, k, quota);
      CHECK(r.regret >= 0);
      for (const auto& s : r.fair_optimal) CHECK(is_fair(s, quota));
      const bool attains = r.fair_utility == r.optimal_utility;
      CHECK((r.regret == 0) == attains);
    }
  }

  TEST_CASE("subset enumeration cap") {
    CHECK(binomial(6, 2) == 15);
    CHECK(binomial(60, 30) > kMaxSubsetEnumeration);
    CHECK_THROWS_AS(for_each_subset(60, 30, [](const auto&) {}), ComplexityError);
  }
}
