#pragma once

// Pareto fronts of the per-sub-utility image of the solution space and the
// nested chain linking them to the θ-optimal set.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "noregret/core_model.hpp"
#include "noregret/discrete_solver.hpp"

namespace noregret {

/// A selection and its image (U_1(s), ..., U_m(s)).
struct UtilityPoint {
  Selection selection;
  std::vector<Rational> values;
};

/// Images of all size-k selections, lexicographic by members.
std::vector<UtilityPoint> utility_points(const Population& population, const Objective& objective,
                                         std::size_t k);

/// True when `a` is at least as good everywhere and better somewhere.
bool dominates(const std::vector<Rational>& a, const std::vector<Rational>& b);
/// True when `a` is strictly better in every coordinate.
bool strictly_dominates(const std::vector<Rational>& a, const std::vector<Rational>& b);

/// Points no other point dominates. Input order is preserved.
std::vector<UtilityPoint> pareto_front(const std::vector<UtilityPoint>& points);

/// Points no other point strictly dominates in every coordinate.
std::vector<UtilityPoint> weak_pareto_front(const std::vector<UtilityPoint>& points);

struct ConvexFrontOptions {
  /// Weight samples for m >= 3.
  std::size_t samples = 4096;
  std::uint64_t seed = 1;
};

struct ConvexFront {
  std::vector<UtilityPoint> points;
  /// Set for m >= 3, where the front is sampled and may miss members.
  bool approximate = false;
};

/// Selections that maximize Σ θ_j U_j for some strictly positive θ.
///
/// For m = 2 the answer is exact and geometric: the upper-right boundary of
/// the convex hull between the topmost and the rightmost point. Points on a
/// boundary edge (not only its vertices) are included because they tie for
/// the weight normal to that edge. Coincident images are kept as distinct
/// selections.
ConvexFront convex_pareto_front(const std::vector<UtilityPoint>& points,
                                const ConvexFrontOptions& options = {});

/// The nested chain
///   {fairest} ⊆ θ-optimal set ⊆ convex front ⊆ Pareto front ⊆ weak front ⊆ S
/// for a scalar two-attribute mixture, each set listed lexicographically.
struct FrontReport {
  struct Link {
    std::string subset;
    std::string superset;
    bool included = false;
    bool strict = false;
  };

  std::vector<Selection> fairest;
  std::vector<Selection> optimal_set;
  std::vector<Selection> convex_front;
  std::vector<Selection> pareto_front;
  std::vector<Selection> weak_front;
  std::vector<Selection> solution_space;
  std::array<Link, 5> links;

  static constexpr std::array<const char*, 6> kSectionNames = {
      "optimal_fair_solution", "theta_optimal_set", "convex_pareto_front",
      "pareto_front",          "weak_pareto_front", "solution_space"};

  const std::vector<Selection>& section(std::size_t i) const;
  bool all_strict() const;
};

FrontReport front_report(const Population& population, const Objective& objective,
                         const ThetaDomain& domain, std::size_t k, const FairnessSpec& fairness);

}  // namespace noregret
