#include "noregret/discrete_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "noregret/errors.hpp"

namespace noregret {

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    // result * num is divisible by i at every step.
    result = result * num / i;
  }
  return result;
}

void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (k > n) return;
  const std::uint64_t count = binomial(n, k);
  if (count > kMaxSubsetEnumeration) {
    throw ComplexityError("enumeration of C(" + std::to_string(n) + "," + std::to_string(k) +
                          ") subsets exceeds the cap of " +
                          std::to_string(kMaxSubsetEnumeration));
  }
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(idx);
    // advance to the next combination
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<Selection> all_selections(const Population& population, const Objective& objective,
                                      std::size_t k) {
  std::vector<Selection> out;
  for_each_subset(population.size(), k, [&](const std::vector<std::size_t>& idx) {
    out.push_back(Selection::make(population, objective, idx));
  });
  return out;
}

namespace {

void check_k(const Population& population, std::size_t k) {
  if (k < 1 || k > population.size()) {
    throw ArgumentError("k must lie in [1, " + std::to_string(population.size()) + "], got " +
                        std::to_string(k));
  }
}

}  // namespace

std::vector<Selection> top_k(const Population& population, const Objective& objective,
                             const ThetaPoint& theta, std::size_t k) {
  check_k(population, k);
  objective.check_theta(theta);
  const std::size_t n = population.size();
  std::vector<Rational> score(n);
  for (std::size_t i = 0; i < n; ++i) score[i] = score_item(population.item(i), objective, theta);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  const Rational& threshold = score[order[k - 1]];

  // Items strictly above the k-th score are forced; the remaining slots are
  // filled by every combination of items tied at the threshold.
  std::vector<std::size_t> forced;
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < n; ++i) {
    if (score[i] > threshold) forced.push_back(i);
    else if (score[i] == threshold) tied.push_back(i);
  }
  const std::size_t free_slots = k - forced.size();

  std::vector<Selection> out;
  for_each_subset(tied.size(), free_slots, [&](const std::vector<std::size_t>& pick) {
    std::vector<std::size_t> members = forced;
    for (std::size_t p : pick) members.push_back(tied[p]);
    out.push_back(Selection::make(population, objective, std::move(members)));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Selection> quota_constrained_optimum(const Population& population,
                                                 const Objective& objective,
                                                 const ThetaPoint& theta, std::size_t k,
                                                 const FairnessSpec& fairness) {
  check_k(population, k);
  objective.check_theta(theta);
  fairness.validate(population);

  std::vector<Selection> best;
  std::optional<Rational> best_value;
  for_each_subset(population.size(), k, [&](const std::vector<std::size_t>& idx) {
    Selection sel = Selection::make(population, objective, idx);
    if (!is_fair(sel, fairness)) return;
    Rational value = score_selection(sel, objective, theta);
    if (!best_value || value > *best_value) {
      best_value = std::move(value);
      best.clear();
      best.push_back(std::move(sel));
    } else if (value == *best_value) {
      best.push_back(std::move(sel));
    }
  });
  if (best.empty()) {
    throw InfeasibleError("no subset of size " + std::to_string(k) +
                          " satisfies the fairness quota");
  }
  std::sort(best.begin(), best.end());
  return best;
}

RegretReport regret(const Population& population, const Objective& objective,
                    const ThetaPoint& theta, std::size_t k, const FairnessSpec& fairness) {
  RegretReport report;
  report.theta = theta;
  report.optimal = top_k(population, objective, theta, k);
  report.fair_optimal = quota_constrained_optimum(population, objective, theta, k, fairness);
  report.optimal_utility = score_selection(report.optimal.front(), objective, theta);
  report.fair_utility = score_selection(report.fair_optimal.front(), objective, theta);
  report.regret = report.optimal_utility - report.fair_utility;
  return report;
}

// ---------------------------------------------------------------------------

std::vector<Rational> crossing_points(const Population& population, const Objective& objective,
                                      const ThetaDomain& domain) {
  const Interval& range = domain.as_interval();
  std::vector<Objective::Line> lines;
  lines.reserve(population.size());
  for (const auto& item : population.items()) lines.push_back(objective.line(item));

  std::vector<Rational> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i].slope == lines[j].slope) continue;
      Rational theta = (lines[j].intercept - lines[i].intercept) / (lines[i].slope - lines[j].slope);
      if (range.contains(theta)) out.push_back(std::move(theta));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<OptimalSetEntry> enumerate_optimal_set(const Population& population,
                                                   const Objective& objective,
                                                   const ThetaDomain& domain, std::size_t k) {
  if (!domain.is_interval() || objective.theta_dimension() != 1) {
    throw ArgumentError("exact enumeration needs a scalar objective and interval domain; "
                        "use sampling for m >= 2");
  }
  check_k(population, k);
  const Interval& range = domain.as_interval();

  std::vector<Rational> breaks = crossing_points(population, objective, domain);
  breaks.push_back(range.lo);
  breaks.push_back(range.hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Keyed by member ids; the region of a fixed k-set is convex in θ, so the
  // hull of its pieces is exactly where it is optimal.
  std::map<std::vector<std::string>, OptimalSetEntry> found;
  auto record = [&](const Rational& probe, const Interval& piece) {
    for (auto& sel : top_k(population, objective, {probe}, k)) {
      auto key = sel.ids();
      auto it = found.find(key);
      if (it == found.end()) {
        OptimalSetEntry entry{std::move(sel), piece, {}, {}, {}, false};
        found.emplace(std::move(key), std::move(entry));
      } else {
        Interval& region = *it->second.region;
        region.lo = std::min(region.lo, piece.lo);
        region.hi = std::max(region.hi, piece.hi);
      }
    }
  };

  for (std::size_t i = 0; i < breaks.size(); ++i) {
    record(breaks[i], Interval{breaks[i], breaks[i]});
    if (i + 1 < breaks.size()) {
      record(midpoint(breaks[i], breaks[i + 1]), Interval{breaks[i], breaks[i + 1]});
    }
  }

  std::vector<OptimalSetEntry> out;
  out.reserve(found.size());
  for (auto& [key, entry] : found) {
    entry.representative = {entry.region->mid()};
    entry.utility = score_selection(entry.selection, objective, entry.representative);
    entry.witnesses = {entry.representative};
    out.push_back(std::move(entry));
  }
  std::sort(out.begin(), out.end(), [](const OptimalSetEntry& a, const OptimalSetEntry& b) {
    if (a.region->lo != b.region->lo) return a.region->lo < b.region->lo;
    return a.selection < b.selection;
  });
  return out;
}

std::vector<Rational> change_points(const std::vector<OptimalSetEntry>& entries,
                                    const ThetaDomain& domain) {
  const Interval& range = domain.as_interval();
  std::vector<Rational> out;
  for (const auto& e : entries) {
    if (!e.region) continue;
    for (const Rational* end : {&e.region->lo, &e.region->hi}) {
      if (range.lo < *end && *end < range.hi) out.push_back(*end);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  return perm;
}

}  // namespace

std::vector<ThetaPoint> sample_theta(const ThetaDomain& domain, std::size_t samples,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ThetaPoint> out;
  out.reserve(samples);
  if (const auto* box = domain.as_box()) {
    const std::size_t m = box->lo.size();
    std::vector<std::vector<std::size_t>> strata;
    for (std::size_t j = 0; j < m; ++j) strata.push_back(shuffled(samples, rng));
    for (std::size_t i = 0; i < samples; ++i) {
      ThetaPoint theta(m);
      for (std::size_t j = 0; j < m; ++j) {
        const double t = (static_cast<double>(strata[j][i]) + unit_uniform(rng)) /
                         static_cast<double>(samples);
        theta[j] = box->lo[j] + (box->hi[j] - box->lo[j]) * from_double(t);
      }
      out.push_back(std::move(theta));
    }
    return out;
  }
  if (const auto* hull = domain.as_hull()) {
    const auto& vertices = hull->vertices;
    const std::size_t m = vertices.front().size();
    for (std::size_t i = 0; i < samples && i < vertices.size(); ++i) out.push_back(vertices[i]);
    while (out.size() < samples) {
      // Flat Dirichlet weights over the vertices.
      std::vector<Rational> w(vertices.size());
      Rational total = 0;
      for (auto& wi : w) {
        wi = from_double(-std::log1p(-unit_uniform(rng)));
        total += wi;
      }
      ThetaPoint theta(m, Rational(0));
      for (std::size_t v = 0; v < vertices.size(); ++v) {
        const Rational weight = total == 0 ? Rational(1, vertices.size()) : w[v] / total;
        for (std::size_t j = 0; j < m; ++j) theta[j] += weight * vertices[v][j];
      }
      out.push_back(std::move(theta));
    }
    return out;
  }
  throw ArgumentError("sampling needs a box or hull domain");
}

std::vector<OptimalSetEntry> sample_optimal_set(const Population& population,
                                                const Objective& objective,
                                                const ThetaDomain& domain, std::size_t k,
                                                std::size_t samples, std::uint64_t seed) {
  if (domain.is_interval()) throw ArgumentError("scalar domain: use the exact enumeration");
  if (samples < 1) throw ArgumentError("sample count must be at least 1");
  if (objective.theta_dimension() != domain.dimension()) {
    throw ParameterError("objective expects theta of dimension " +
                         std::to_string(objective.theta_dimension()) + ", domain has " +
                         std::to_string(domain.dimension()));
  }
  check_k(population, k);

  std::map<std::vector<std::string>, OptimalSetEntry> found;
  for (auto& theta : sample_theta(domain, samples, seed)) {
    for (auto& sel : top_k(population, objective, theta, k)) {
      auto key = sel.ids();
      auto it = found.find(key);
      if (it == found.end()) {
        OptimalSetEntry entry{std::move(sel), std::nullopt, {theta}, theta, {}, true};
        found.emplace(std::move(key), std::move(entry));
      } else {
        it->second.witnesses.push_back(theta);
      }
    }
  }
  std::vector<OptimalSetEntry> out;
  for (auto& [key, entry] : found) {
    entry.utility = score_selection(entry.selection, objective, entry.representative);
    out.push_back(std::move(entry));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Rational distance_sq(const ThetaPoint& a, const ThetaPoint& b) {
  Rational sum = 0;
  for (std::size_t j = 0; j < a.size() && j < b.size(); ++j) sum += (a[j] - b[j]) * (a[j] - b[j]);
  return sum;
}

Rational distance_to_entry(const OptimalSetEntry& e, const ThetaPoint& target) {
  if (e.region && target.size() == 1) {
    const Rational& t = target[0];
    if (e.region->contains(t)) return 0;
    const Rational d = t < e.region->lo ? e.region->lo - t : t - e.region->hi;
    return d * d;
  }
  Rational best = distance_sq(e.representative, target);
  for (const auto& w : e.witnesses) best = std::min(best, distance_sq(w, target));
  return best;
}

}  // namespace

FairestResult fairest_optimal(const std::vector<OptimalSetEntry>& entries,
                              const FairnessSpec& fairness, const FairestOptions& options) {
  if (entries.empty()) throw ArgumentError("fairest_optimal needs at least one entry");

  std::vector<Rational> score;
  score.reserve(entries.size());
  for (const auto& e : entries) score.push_back(fairness_score(e.selection, fairness));
  const Rational best = *std::max_element(score.begin(), score.end());

  std::vector<OptimalSetEntry> tied;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (score[i] == best) tied.push_back(entries[i]);
  }
  if (options.prefer_near) {
    std::stable_sort(tied.begin(), tied.end(), [&](const auto& a, const auto& b) {
      return distance_to_entry(a, *options.prefer_near) <
             distance_to_entry(b, *options.prefer_near);
    });
  }

  const OptimalSetEntry& win = tied.front();
  FairestResult result{win.selection, win.representative, win.region, best, win.utility, {}};
  result.tied = std::move(tied);
  return result;
}

}  // namespace noregret
