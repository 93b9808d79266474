#pragma once

// Shared test fixtures: the six-student admission example and a seeded
// generator of small random populations with rational attributes.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "noregret/core_model.hpp"

namespace noregret::testing {

inline Rational Q(const char* text) { return parse_rational(text); }

/// ID, name, IQ, grade, gender; IQ rescaled by 10.
inline Population students() {
  Schema schema{{{"IQ", Rational(10)}, {"grade", Rational(1)}}, "gender"};
  std::vector<ItemRecord> items = {
      {"A", {100, 10}, "f", "Amy"}, {"B", {150, 7}, "m", "Bob"},
      {"E", {150, 5}, "f", "Eve"},  {"I", {110, 9}, "f", "Isa"},
      {"M", {70, 9}, "m", "Max"},   {"Z", {140, 8}, "m", "Zac"},
  };
  return Population(std::move(schema), std::move(items));
}

inline Objective iq_grade(const Population& pop) {
  return Objective::bind(ObjectiveSpec::two_attribute("IQ", "grade"), pop.schema());
}

inline Objective iq_grade_linear(const Population& pop) {
  return Objective::bind(ObjectiveSpec::linear({"IQ", "grade"}), pop.schema());
}

inline FairnessSpec gender_mismatch() { return {MismatchFairness{{"m", "f"}}, std::nullopt}; }

inline FairnessSpec women_quota(const char* share) {
  return {std::nullopt, QuotaFairness{"f", Q(share)}};
}

inline Selection sel(const Population& pop, const Objective& obj,
                     std::vector<std::string> names) {
  return Selection::make(pop, obj, names);
}

/// Random population: `n` items, `m` attributes drawn as p/q with small
/// integers (so ties and coincident points occur), two groups.
inline Population random_population(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  Schema schema;
  for (std::size_t j = 0; j < m; ++j) {
    schema.attributes.push_back({"a" + std::to_string(j), Rational(1 + rng() % 3)});
  }
  schema.group_column = "g";
  std::vector<ItemRecord> items;
  for (std::size_t i = 0; i < n; ++i) {
    ItemRecord item;
    item.id = "x" + std::to_string(i);
    for (std::size_t j = 0; j < m; ++j) {
      item.attributes.push_back(Rational(static_cast<long long>(rng() % 13),
                                         static_cast<long long>(1 + rng() % 4)));
    }
    item.group = (rng() % 2) ? "p" : "q";
    items.push_back(std::move(item));
  }
  // both labels must occur
  items[0].group = "p";
  items[1].group = "q";
  return Population(std::move(schema), std::move(items));
}

}  // namespace noregret::testing
