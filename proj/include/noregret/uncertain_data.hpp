#pragma once

// Fairness optimization over completions of interval-valued data, and the
// audit that exposes it.
//
// WARNING: this is a demonstration of a flawed procedure, not a
// recommendation. Picking the completion whose optimal selection is fairest
// amounts to imputing values selectively per group (low for one, high for
// the other). The audit measures exactly that asymmetry. Do not use the
// returned selection as a fair decision.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "noregret/core_model.hpp"

namespace noregret {

inline constexpr std::size_t kMaxUncertainCells = 20;

inline constexpr const char* kDiagnosticWarning =
    "DIAGNOSTIC ONLY: the fairest completion is obtained by imputing values selectively by "
    "group; it is not a fair decision procedure. Inspect the imputation audit.";

struct IntervalRecord {
  std::string id;
  std::vector<Interval> attributes;
  std::string group;
  std::string name;
};

class IntervalPopulation {
 public:
  /// Validates like Population, plus lo <= hi in every cell.
  IntervalPopulation(Schema schema, std::vector<IntervalRecord> records);

  const Schema& schema() const { return schema_; }
  const std::vector<IntervalRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  struct Cell {
    std::size_t item;
    std::size_t attribute;
  };
  /// Non-degenerate cells in item-major order.
  std::vector<Cell> uncertain_cells() const;

 private:
  Schema schema_;
  std::vector<IntervalRecord> records_;
};

/// One concrete value per (item, attribute).
struct Completion {
  std::vector<std::vector<Rational>> values;

  /// Every cell at its lower endpoint.
  static Completion lower(const IntervalPopulation& records);
  /// Throws ConsistencyError when a value lies outside its interval.
  Population induced(const IntervalPopulation& records) const;
};

struct ItemPosition {
  std::string id;
  std::string group;
  /// (value − lo)/(hi − lo) per attribute; 1/2 for degenerate intervals.
  std::vector<Rational> attribute_positions;
  Rational position;  // mean over attributes
};

struct ImputationAudit {
  std::vector<ItemPosition> items;
  std::map<std::string, Rational> group_means;
  /// max − min of the group means (|difference| for two groups).
  Rational asymmetry;
};

/// Positions of each imputed value inside its interval, per group.
ImputationAudit audit_only(const Completion& completion, const IntervalPopulation& records);

struct FairestCompletion {
  Completion completion;
  /// Every optimal selection under the chosen completion.
  std::vector<Selection> optimal;
  /// The fairest of `optimal`.
  Selection selection;
  Rational fairness;
  ImputationAudit audit;
  std::size_t completions_searched = 0;
  const char* warning = kDiagnosticWarning;
};

/// Searches every endpoint completion for the one whose optimal selection
/// is fairest at fixed θ. Endpoints suffice because utilities are linear in
/// each attribute. Ties in fairness go to the lexicographically first
/// completion (lower endpoint before upper, cells in item-major order).
/// Throws ComplexityError with the count when more than kMaxUncertainCells
/// cells are non-degenerate.
FairestCompletion fairest_completion(const IntervalPopulation& records,
                                     const ObjectiveSpec& objective, const ThetaPoint& theta,
                                     std::size_t k, const FairnessSpec& fairness);

}  // namespace noregret
