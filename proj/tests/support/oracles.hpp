#pragma once

// Brute-force reference implementations. These deliberately avoid the
// library's solvers: subsets are enumerated by bitmask and utilities are
// summed straight from the raw attribute columns.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "noregret/core_model.hpp"

namespace noregret::testing {

using IdSet = std::vector<std::string>;  // member ids, population order

inline std::vector<std::vector<std::size_t>> brute_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    out.push_back(members);
  }
  return out;
}

inline IdSet ids_of(const Population& pop, const std::vector<std::size_t>& members) {
  IdSet ids;
  for (auto i : members) ids.push_back(pop.item(i).id);
  return ids;
}

/// Per-sub-utility sums for `columns`, rescaled by the schema divisors.
inline std::vector<Rational> brute_vector(const Population& pop,
                                          const std::vector<std::string>& columns,
                                          const std::vector<std::size_t>& members) {
  std::vector<Rational> v;
  for (const auto& name : columns) {
    std::size_t col = 0;
    while (pop.schema().attributes[col].name != name) ++col;
    Rational sum = 0;
    for (auto i : members) sum += pop.item(i).attributes[col];
    v.push_back(sum / pop.schema().attributes[col].divisor);
  }
  return v;
}

inline Rational brute_weighted(const std::vector<Rational>& weights,
                               const std::vector<Rational>& v) {
  Rational s = 0;
  for (std::size_t j = 0; j < v.size(); ++j) s += weights[j] * v[j];
  return s;
}

/// Exhaustive argmax of Σ_j w_j U_j over all k-subsets.
inline std::set<IdSet> brute_argmax(const Population& pop, const std::vector<std::string>& columns,
                                    const std::vector<Rational>& weights, std::size_t k) {
  std::set<IdSet> best;
  Rational best_value;
  bool first = true;
  for (const auto& members : brute_subsets(pop.size(), k)) {
    const Rational value = brute_weighted(weights, brute_vector(pop, columns, members));
    if (first || value > best_value) {
      best = {ids_of(pop, members)};
      best_value = value;
      first = false;
    } else if (value == best_value) {
      best.insert(ids_of(pop, members));
    }
  }
  return best;
}

struct BrutePoint {
  IdSet ids;
  std::vector<Rational> v;
};

inline std::vector<BrutePoint> brute_points(const Population& pop,
                                            const std::vector<std::string>& columns,
                                            std::size_t k) {
  std::vector<BrutePoint> pts;
  for (const auto& members : brute_subsets(pop.size(), k)) {
    pts.push_back({ids_of(pop, members), brute_vector(pop, columns, members)});
  }
  return pts;
}

inline std::set<IdSet> brute_pareto(const std::vector<BrutePoint>& pts, bool weak) {
  std::set<IdSet> out;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts) {
      bool all_ge = true, all_gt = true, any_gt = false;
      for (std::size_t j = 0; j < p.v.size(); ++j) {
        all_ge = all_ge && q.v[j] >= p.v[j];
        all_gt = all_gt && q.v[j] > p.v[j];
        any_gt = any_gt || q.v[j] > p.v[j];
      }
      if (weak ? all_gt : (all_ge && any_gt)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(p.ids);
  }
  return out;
}

/// m = 2 convex front by linear feasibility: p is optimal for weights
/// (t, 1−t) iff t·(q₀−p₀) + (1−t)·(q₁−p₁) <= 0 for every q. Each
/// constraint bounds t on one side; p qualifies iff the feasible set
/// meets the open interval (0,1).
inline std::set<IdSet> brute_convex_front(const std::vector<BrutePoint>& pts) {
  std::set<IdSet> out;
  for (const auto& p : pts) {
    Rational lo = 0, hi = 1;
    bool lo_open = true, hi_open = true, feasible = true;
    for (const auto& q : pts) {
      // (dx − dy)·t + dy <= 0
      const Rational dx = q.v[0] - p.v[0];
      const Rational dy = q.v[1] - p.v[1];
      const Rational a = dx - dy;
      if (a == 0) {
        if (dy > 0) feasible = false;
      } else if (a > 0) {
        const Rational bound = -dy / a;  // t <= bound
        if (bound < hi) {
          hi = bound;
          hi_open = false;
        }
      } else {
        const Rational bound = -dy / a;  // t >= bound
        if (bound > lo) {
          lo = bound;
          lo_open = false;
        }
      }
    }
    if (!feasible) continue;
    const bool nonempty = (lo < hi) || (lo == hi && !lo_open && !hi_open);
    if (nonempty) out.insert(p.ids);
  }
  return out;
}

}  // namespace noregret::testing
