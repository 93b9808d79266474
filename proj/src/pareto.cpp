#include "noregret/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "noregret/errors.hpp"

namespace noregret {

std::vector<UtilityPoint> utility_points(const Population& population, const Objective& objective,
                                         std::size_t k) {
  std::vector<UtilityPoint> out;
  for (auto& sel : all_selections(population, objective, k)) {
    auto values = sel.utility();
    out.push_back({std::move(sel), std::move(values)});
  }
  return out;
}

bool dominates(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  bool better = false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < b[j]) return false;
    if (a[j] > b[j]) better = true;
  }
  return better;
}

bool strictly_dominates(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] > b[j])) return false;
  }
  return !a.empty();
}

namespace {

void check_dimensions(const std::vector<UtilityPoint>& points) {
  for (const auto& p : points) {
    if (p.values.size() != points.front().values.size()) {
      throw ArgumentError("utility points differ in dimension");
    }
  }
}

template <typename Pred>
std::vector<UtilityPoint> undominated(const std::vector<UtilityPoint>& points, Pred beats) {
  check_dimensions(points);
  std::vector<UtilityPoint> out;
  for (const auto& p : points) {
    const bool beaten = std::any_of(points.begin(), points.end(),
                                    [&](const UtilityPoint& q) { return beats(q.values, p.values); });
    if (!beaten) out.push_back(p);
  }
  return out;
}

using Vec2 = std::vector<Rational>;

// (a − o) × (b − o)
Rational cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::vector<Vec2> upper_right_boundary(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Topmost point (rightmost among ties) and rightmost point (topmost among ties).
  Vec2 top = pts.front();
  Vec2 right = pts.front();
  for (const auto& p : pts) {
    if (p[1] > top[1] || (p[1] == top[1] && p[0] > top[0])) top = p;
    if (p[0] > right[0] || (p[0] == right[0] && p[1] > right[1])) right = p;
  }
  if (top == right) return {top};

  std::vector<Vec2> candidates;
  for (const auto& p : pts) {
    if (p[0] >= top[0] && p[1] >= right[1]) candidates.push_back(p);
  }
  // x ascending, y descending
  std::sort(candidates.begin(), candidates.end(), [](const Vec2& a, const Vec2& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] > b[1];
  });

  // Monotone chain keeping collinear points: only strict left turns pop.
  std::vector<Vec2> chain;
  for (const auto& p : candidates) {
    while (chain.size() >= 2 && cross(chain[chain.size() - 2], chain.back(), p) > 0) {
      chain.pop_back();
    }
    // a point directly below the previous one can never be on this boundary
    if (!chain.empty() && chain.back()[0] == p[0]) continue;
    chain.push_back(p);
  }
  return chain;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<UtilityPoint> pareto_front(const std::vector<UtilityPoint>& points) {
  return undominated(points, dominates);
}

std::vector<UtilityPoint> weak_pareto_front(const std::vector<UtilityPoint>& points) {
  return undominated(points, strictly_dominates);
}

ConvexFront convex_pareto_front(const std::vector<UtilityPoint>& points,
                                const ConvexFrontOptions& options) {
  ConvexFront front;
  if (points.empty()) return front;
  check_dimensions(points);
  const std::size_t m = points.front().values.size();

  if (m == 1) {
    Rational best = points.front().values[0];
    for (const auto& p : points) best = std::max(best, p.values[0]);
    for (const auto& p : points) {
      if (p.values[0] == best) front.points.push_back(p);
    }
    return front;
  }

  if (m == 2) {
    std::vector<Vec2> images;
    for (const auto& p : points) images.push_back(p.values);
    auto boundary = upper_right_boundary(std::move(images));
    std::sort(boundary.begin(), boundary.end());
    for (const auto& p : points) {
      if (std::binary_search(boundary.begin(), boundary.end(), p.values)) front.points.push_back(p);
    }
    return front;
  }

  // m >= 3: sampled positive weights.
  front.approximate = true;
  std::mt19937_64 rng(options.seed);
  std::vector<bool> hit(points.size(), false);
  for (std::size_t s = 0; s < options.samples; ++s) {
    std::vector<Rational> w(m);
    for (auto& wj : w) {
      // strictly positive exponential weight
      wj = from_double(-std::log1p(-unit_uniform(rng)) + 1e-9);
    }
    std::vector<Rational> value(points.size());
    Rational best;
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = 0; j < m; ++j) value[i] += w[j] * points[i].values[j];
      if (i == 0 || value[i] > best) best = value[i];
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (value[i] == best) hit[i] = true;
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (hit[i]) front.points.push_back(points[i]);
  }
  return front;
}

// ---------------------------------------------------------------------------

const std::vector<Selection>& FrontReport::section(std::size_t i) const {
  switch (i) {
    case 0: return fairest;
    case 1: return optimal_set;
    case 2: return convex_front;
    case 3: return pareto_front;
    case 4: return weak_front;
    case 5: return solution_space;
    default: throw ArgumentError("front report has six sections");
  }
}

bool FrontReport::all_strict() const {
  return std::all_of(links.begin(), links.end(), [](const Link& l) { return l.included && l.strict; });
}

namespace {

std::vector<Selection> selections_of(const std::vector<UtilityPoint>& points) {
  std::vector<Selection> out;
  for (const auto& p : points) out.push_back(p.selection);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

FrontReport front_report(const Population& population, const Objective& objective,
                         const ThetaDomain& domain, std::size_t k, const FairnessSpec& fairness) {
  if (objective.kind() != MixtureKind::TwoAttribute || !domain.is_interval()) {
    throw ArgumentError("the front report needs a two-attribute mixture over an interval domain");
  }
  fairness.validate(population);

  const auto entries = enumerate_optimal_set(population, objective, domain, k);
  const auto best = fairest_optimal(entries, fairness);
  const auto points = utility_points(population, objective, k);

  FrontReport report;
  report.fairest = {best.winner};
  for (const auto& e : entries) report.optimal_set.push_back(e.selection);
  std::sort(report.optimal_set.begin(), report.optimal_set.end());
  report.convex_front = selections_of(convex_pareto_front(points).points);
  report.pareto_front = selections_of(pareto_front(points));
  report.weak_front = selections_of(weak_pareto_front(points));
  report.solution_space = selections_of(points);

  for (std::size_t i = 0; i < report.links.size(); ++i) {
    const auto& sub = report.section(i);
    const auto& sup = report.section(i + 1);
    auto& link = report.links[i];
    link.subset = FrontReport::kSectionNames[i];
    link.superset = FrontReport::kSectionNames[i + 1];
    link.included = std::includes(sup.begin(), sup.end(), sub.begin(), sub.end());
    link.strict = link.included && sup.size() > sub.size();
  }
  return report;
}

}  // namespace noregret
