#pragma once

// Domain types shared by every solver: populations of items, the
// parametrized utility family, selections, and fairness criteria.
// All values are immutable after construction.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "noregret/rational.hpp"

namespace noregret {

/// A numeric column. `divisor` rescales raw values before they enter a
/// utility (IQ/10 makes IQ commensurable with grades).
struct Attribute {
  std::string name;
  Rational divisor{1};
};

struct Schema {
  std::vector<Attribute> attributes;
  std::string group_column;

  std::optional<std::size_t> find(std::string_view name) const;
  /// Index of `name`; throws SchemaError when absent.
  std::size_t require(std::string_view name) const;
};

struct ItemRecord {
  std::string id;
  std::vector<Rational> attributes;  // raw values, schema order
  std::string group;
  std::string name;  // optional display name
};

class Population {
 public:
  /// Validates: nonempty, unique ids, one value per schema attribute,
  /// strictly positive divisors.
  Population(Schema schema, std::vector<ItemRecord> items);

  const Schema& schema() const { return schema_; }
  const std::vector<ItemRecord>& items() const { return items_; }
  const ItemRecord& item(std::size_t i) const { return items_.at(i); }
  std::size_t size() const { return items_.size(); }

  /// Looks an item up by id, falling back to display name.
  std::size_t index_of(std::string_view id_or_name) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& keys) const;

  /// Distinct group labels, sorted.
  std::vector<std::string> group_labels() const;

 private:
  Schema schema_;
  std::vector<ItemRecord> items_;
};

/// A parameter vector θ. Scalar families use a single coordinate.
using ThetaPoint = std::vector<Rational>;

/// The admissible parameter set Θ: a closed interval inside [0,1] when the
/// family is scalar, otherwise a box or the convex hull of expert points,
/// both strictly positive.
class ThetaDomain {
 public:
  struct Box {
    ThetaPoint lo;
    ThetaPoint hi;
  };
  struct Hull {
    std::vector<ThetaPoint> vertices;
  };

  static ThetaDomain interval(Rational lo, Rational hi);
  static ThetaDomain point(Rational theta) { return interval(theta, theta); }
  static ThetaDomain box(ThetaPoint lo, ThetaPoint hi);
  static ThetaDomain hull(std::vector<ThetaPoint> vertices);

  std::size_t dimension() const;
  bool is_interval() const { return std::holds_alternative<Interval>(shape_); }
  const Interval& as_interval() const;
  const Box* as_box() const { return std::get_if<Box>(&shape_); }
  const Hull* as_hull() const { return std::get_if<Hull>(&shape_); }

  /// Membership test for interval and box domains.
  bool contains(const ThetaPoint& theta) const;

 private:
  explicit ThetaDomain(std::variant<Interval, Box, Hull> shape) : shape_(std::move(shape)) {}
  std::variant<Interval, Box, Hull> shape_;
};

enum class MixtureKind {
  /// θ·a₁/d₁ + (1−θ)·a₂/d₂ with scalar θ.
  TwoAttribute,
  /// Σ_j θ_j·a_j/d_j with one weight per listed attribute.
  Linear,
};

struct ObjectiveSpec {
  MixtureKind kind = MixtureKind::TwoAttribute;
  std::vector<std::string> attributes;

  static ObjectiveSpec two_attribute(std::string first, std::string second) {
    return {MixtureKind::TwoAttribute, {std::move(first), std::move(second)}};
  }
  static ObjectiveSpec linear(std::vector<std::string> attributes) {
    return {MixtureKind::Linear, std::move(attributes)};
  }
};

/// An ObjectiveSpec resolved against a schema. Every member of the family is
/// a weighted sum of rescaled sub-utilities u_j(item) = a_j / d_j.
class Objective {
 public:
  /// Throws SchemaError for unknown attributes, ConfigError for malformed specs.
  static Objective bind(const ObjectiveSpec& spec, const Schema& schema);

  MixtureKind kind() const { return kind_; }
  const ObjectiveSpec& spec() const { return spec_; }
  /// Dimension of θ.
  std::size_t theta_dimension() const;
  /// Number of sub-utilities (m for the Pareto view).
  std::size_t sub_utility_count() const { return columns_.size(); }

  std::vector<Rational> sub_utilities(const ItemRecord& item) const;
  /// Weights applied to the sub-utilities at θ. Throws ParameterError on a
  /// dimension mismatch.
  std::vector<Rational> weights(const ThetaPoint& theta) const;
  void check_theta(const ThetaPoint& theta) const;

  /// For scalar θ the score of an item is affine in θ: intercept + slope·θ.
  struct Line {
    Rational intercept;
    Rational slope;
  };
  Line line(const ItemRecord& item) const;

 private:
  MixtureKind kind_ = MixtureKind::TwoAttribute;
  ObjectiveSpec spec_;
  std::vector<std::size_t> columns_;
  std::vector<Rational> divisors_;
};

Rational score_item(const ItemRecord& item, const Objective& objective, const ThetaPoint& theta);

/// A size-k subset of a population with its cached per-sub-utility sums and
/// per-group counts. Identity is the member set.
class Selection {
 public:
  /// Throws SchemaError for indices outside the population or duplicates.
  static Selection make(const Population& population, const Objective& objective,
                        std::vector<std::size_t> indices);
  static Selection make(const Population& population, const Objective& objective,
                        const std::vector<std::string>& ids);

  const std::vector<std::size_t>& indices() const { return indices_; }
  /// Member ids in population order.
  const std::vector<std::string>& ids() const { return ids_; }
  /// Display names (falling back to ids) in population order.
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<Rational>& utility() const { return utility_; }
  /// Count per group label; every label of the population is present.
  const std::map<std::string, std::size_t>& group_counts() const { return group_counts_; }

  /// "{Amy, Zac}"
  std::string label() const;

  friend bool operator==(const Selection& a, const Selection& b) { return a.ids_ == b.ids_; }
  friend bool operator<(const Selection& a, const Selection& b) { return a.ids_ < b.ids_; }

 private:
  std::vector<std::size_t> indices_;
  std::vector<std::string> ids_;
  std::vector<std::string> names_;
  std::vector<Rational> utility_;
  std::map<std::string, std::size_t> group_counts_;
};

Rational score_selection(const Selection& selection, const Objective& objective,
                         const ThetaPoint& theta);

/// Soft criterion: F = −(max count − min count) over the designated labels.
/// With two labels this is minus the absolute count mismatch.
struct MismatchFairness {
  std::vector<std::string> labels;
};

/// Hard criterion: fair iff the share of `label` is at least `min_share`.
struct QuotaFairness {
  std::string label;
  Rational min_share;
};

/// Larger F is fairer; 0 is perfect balance.
struct FairnessSpec {
  std::optional<MismatchFairness> mismatch;
  std::optional<QuotaFairness> quota;

  /// Throws SpecError when a designated label does not occur in the
  /// population, or the quota lies outside [0,1].
  void validate(const Population& population) const;
};

Rational fairness_score(const Selection& selection, const FairnessSpec& spec);
bool is_fair(const Selection& selection, const FairnessSpec& spec);

}  // namespace noregret
