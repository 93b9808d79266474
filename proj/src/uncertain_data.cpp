#include "noregret/uncertain_data.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>

#include "noregret/discrete_solver.hpp"
#include "noregret/errors.hpp"

namespace noregret {

IntervalPopulation::IntervalPopulation(Schema schema, std::vector<IntervalRecord> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
  if (records_.empty()) throw SchemaError("population is empty");
  std::set<std::string> seen;
  for (const auto& r : records_) {
    if (!seen.insert(r.id).second) throw SchemaError("duplicate id '" + r.id + "'");
    if (r.attributes.size() != schema_.attributes.size()) {
      throw SchemaError("item '" + r.id + "' does not match the attribute schema");
    }
    for (const auto& iv : r.attributes) {
      if (iv.lo > iv.hi) throw SchemaError("item '" + r.id + "' has an interval with lo > hi");
    }
  }
}

std::vector<IntervalPopulation::Cell> IntervalPopulation::uncertain_cells() const {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    for (std::size_t j = 0; j < records_[i].attributes.size(); ++j) {
      if (!records_[i].attributes[j].is_point()) cells.push_back({i, j});
    }
  }
  return cells;
}

Completion Completion::lower(const IntervalPopulation& records) {
  Completion c;
  for (const auto& r : records.records()) {
    std::vector<Rational> row;
    for (const auto& iv : r.attributes) row.push_back(iv.lo);
    c.values.push_back(std::move(row));
  }
  return c;
}

namespace {

void check_consistent(const Completion& completion, const IntervalPopulation& records) {
  if (completion.values.size() != records.size()) {
    throw ConsistencyError("completion has the wrong number of items");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records.records()[i];
    if (completion.values[i].size() != rec.attributes.size()) {
      throw ConsistencyError("completion row for '" + rec.id + "' has the wrong width");
    }
    for (std::size_t j = 0; j < rec.attributes.size(); ++j) {
      if (!rec.attributes[j].contains(completion.values[i][j])) {
        throw ConsistencyError("value " + to_string(completion.values[i][j]) + " for '" + rec.id +
                               "." + records.schema().attributes[j].name +
                               "' lies outside its interval");
      }
    }
  }
}

}  // namespace

Population Completion::induced(const IntervalPopulation& records) const {
  check_consistent(*this, records);
  std::vector<ItemRecord> items;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records.records()[i];
    items.push_back({rec.id, values[i], rec.group, rec.name});
  }
  return Population(records.schema(), std::move(items));
}

ImputationAudit audit_only(const Completion& completion, const IntervalPopulation& records) {
  check_consistent(completion, records);
  ImputationAudit audit;
  std::map<std::string, std::pair<Rational, std::size_t>> totals;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records.records()[i];
    ItemPosition pos{rec.id, rec.group, {}, Rational(0)};
    for (std::size_t j = 0; j < rec.attributes.size(); ++j) {
      const auto& iv = rec.attributes[j];
      pos.attribute_positions.push_back(iv.is_point() ? Rational(1, 2)
                                                      : (completion.values[i][j] - iv.lo) /
                                                            (iv.hi - iv.lo));
      pos.position += pos.attribute_positions.back();
    }
    if (!rec.attributes.empty()) pos.position /= static_cast<long long>(rec.attributes.size());
    auto& [sum, count] = totals[rec.group];
    sum += pos.position;
    ++count;
    audit.items.push_back(std::move(pos));
  }
  for (const auto& [group, total] : totals) {
    audit.group_means[group] = total.first / static_cast<long long>(total.second);
  }
  const auto [lo, hi] = std::minmax_element(
      audit.group_means.begin(), audit.group_means.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  audit.asymmetry = hi->second - lo->second;
  return audit;
}

FairestCompletion fairest_completion(const IntervalPopulation& records,
                                     const ObjectiveSpec& objective_spec, const ThetaPoint& theta,
                                     std::size_t k, const FairnessSpec& fairness) {
  const auto cells = records.uncertain_cells();
  if (cells.size() > kMaxUncertainCells) {
    throw ComplexityError(std::to_string(cells.size()) + " non-degenerate intervals exceed the "
                          "endpoint-enumeration cap of " + std::to_string(kMaxUncertainCells));
  }
  const Objective objective = Objective::bind(objective_spec, records.schema());
  objective.check_theta(theta);

  std::optional<FairestCompletion> best;
  const std::uint64_t total = std::uint64_t{1} << cells.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Completion completion = Completion::lower(records);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      // first cell is the most significant choice
      if (mask & (std::uint64_t{1} << (cells.size() - 1 - c))) {
        completion.values[cells[c].item][cells[c].attribute] =
            records.records()[cells[c].item].attributes[cells[c].attribute].hi;
      }
    }
    const Population population = completion.induced(records);
    if (mask == 0) fairness.validate(population);
    auto optimal = top_k(population, objective, theta, k);

    // The optimum may be a tie; score it by its fairest member.
    std::size_t pick = 0;
    Rational pick_score = fairness_score(optimal[0], fairness);
    for (std::size_t i = 1; i < optimal.size(); ++i) {
      Rational f = fairness_score(optimal[i], fairness);
      if (f > pick_score) {
        pick = i;
        pick_score = std::move(f);
      }
    }
    if (!best || pick_score > best->fairness) {
      Selection chosen = optimal[pick];
      best = FairestCompletion{std::move(completion), std::move(optimal), std::move(chosen),
                               std::move(pick_score), {}, 0, kDiagnosticWarning};
    }
  }
  best->completions_searched = static_cast<std::size_t>(total);
  best->audit = audit_only(best->completion, records);
  return std::move(*best);
}

}  // namespace noregret
