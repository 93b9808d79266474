#pragma once

// Exact solvers for fixed-size subset selection under a parametrized linear
// utility: per-θ optima with all ties, the quota-constrained baseline and its
// regret, breakpoint enumeration of the θ-optimal set over a scalar Θ, a
// sampled approximation for multi-dimensional Θ, and fairest-optimal
// extraction.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "noregret/core_model.hpp"

namespace noregret {

/// Upper bound on the number of subsets any enumeration will visit.
inline constexpr std::uint64_t kMaxSubsetEnumeration = 5'000'000;

/// One member of the θ-optimal set together with the parameters that
/// certify its optimality.
struct OptimalSetEntry {
  Selection selection;
  /// Scalar Θ: the maximal closed subinterval of Θ on which the selection is
  /// optimal (possibly a single point).
  std::optional<Interval> region;
  /// Sampled Θ: every sampled θ at which the selection was optimal.
  std::vector<ThetaPoint> witnesses;
  /// Region midpoint, or the first witness.
  ThetaPoint representative;
  /// Utility at `representative`. Not comparable across entries.
  Rational utility;
  /// True when produced by sampling (a subset of the true set).
  bool approximate = false;
};

struct FairestResult {
  Selection winner;
  ThetaPoint theta_star;
  std::optional<Interval> region;
  Rational fairness;
  /// Winner's utility at its own θ*.
  Rational utility;
  /// Every entry attaining the maximal fairness, winner first.
  std::vector<OptimalSetEntry> tied;
};

struct RegretReport {
  ThetaPoint theta;
  std::vector<Selection> optimal;
  std::vector<Selection> fair_optimal;
  Rational optimal_utility;
  Rational fair_utility;
  /// optimal_utility − fair_utility, both at `theta`; never negative.
  Rational regret;
};

/// Number of k-subsets of an n-set, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Calls `visit` with each k-subset of {0..n-1} in lexicographic order.
/// Throws ComplexityError above kMaxSubsetEnumeration.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& visit);

/// All size-k selections, lexicographic.
std::vector<Selection> all_selections(const Population& population, const Objective& objective,
                                      std::size_t k);

/// Every size-k subset attaining the maximal utility at θ. When the k-th and
/// (k+1)-th scores differ the result is the single set of the k best items.
std::vector<Selection> top_k(const Population& population, const Objective& objective,
                             const ThetaPoint& theta, std::size_t k);

/// Utility maximizers among the subsets satisfying the hard quota, all ties.
/// Throws InfeasibleError when no size-k subset is fair.
std::vector<Selection> quota_constrained_optimum(const Population& population,
                                                 const Objective& objective,
                                                 const ThetaPoint& theta, std::size_t k,
                                                 const FairnessSpec& fairness);

RegretReport regret(const Population& population, const Objective& objective,
                    const ThetaPoint& theta, std::size_t k, const FairnessSpec& fairness);

/// Every θ in the scalar domain where two items' score lines cross, sorted
/// and deduplicated. Parallel lines never cross.
std::vector<Rational> crossing_points(const Population& population, const Objective& objective,
                                      const ThetaDomain& domain);

/// The exact θ-optimal set over a scalar domain. Θ is partitioned at the
/// crossing points; breakpoints, endpoints and interval midpoints are solved
/// with all ties, and each selection carries the hull of its regions.
/// Entries are ordered by region lower bound, then member ids.
std::vector<OptimalSetEntry> enumerate_optimal_set(const Population& population,
                                                   const Objective& objective,
                                                   const ThetaDomain& domain, std::size_t k);

/// Interior θ values where the optimal set changes, read off the region
/// boundaries of an exact enumeration.
std::vector<Rational> change_points(const std::vector<OptimalSetEntry>& entries,
                                    const ThetaDomain& domain);

/// Seeded approximation of the θ-optimal set for m >= 2. Boxes are sampled by
/// Latin hypercube, hulls by their vertices followed by random convex
/// combinations. Every entry is witnessed, so the result never contains a
/// selection that is not θ-optimal for some θ in Θ.
std::vector<OptimalSetEntry> sample_optimal_set(const Population& population,
                                                const Objective& objective,
                                                const ThetaDomain& domain, std::size_t k,
                                                std::size_t samples, std::uint64_t seed);

/// The θ points sample_optimal_set evaluates, in evaluation order.
std::vector<ThetaPoint> sample_theta(const ThetaDomain& domain, std::size_t samples,
                                     std::uint64_t seed);

struct FairestOptions {
  /// Among equally fair entries prefer the one whose region lies nearest to
  /// this θ. Off by default: ties resolve to the first entry in order.
  std::optional<ThetaPoint> prefer_near;
};

/// The fairest member of the θ-optimal set. Throws ArgumentError when
/// `entries` is empty.
FairestResult fairest_optimal(const std::vector<OptimalSetEntry>& entries,
                              const FairnessSpec& fairness, const FairestOptions& options = {});

}  // namespace noregret
