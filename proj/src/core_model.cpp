#include "noregret/core_model.hpp"

#include <algorithm>
#include <set>

#include "noregret/errors.hpp"

namespace noregret {

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::require(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  throw SchemaError("unknown attribute '" + std::string(name) + "'");
}

Population::Population(Schema schema, std::vector<ItemRecord> items)
    : schema_(std::move(schema)), items_(std::move(items)) {
  if (items_.empty()) throw SchemaError("population is empty");
  for (const auto& attr : schema_.attributes) {
    if (attr.divisor <= 0) {
      throw SchemaError("divisor of attribute '" + attr.name + "' must be positive");
    }
  }
  std::set<std::string> seen;
  for (const auto& item : items_) {
    if (!seen.insert(item.id).second) throw SchemaError("duplicate id '" + item.id + "'");
    if (item.attributes.size() != schema_.attributes.size()) {
      throw SchemaError("item '" + item.id + "' does not match the attribute schema");
    }
  }
}

std::size_t Population::index_of(std::string_view key) const {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].id == key) return i;
  }
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!items_[i].name.empty() && items_[i].name == key) return i;
  }
  throw SchemaError("unknown item '" + std::string(key) + "'");
}

std::vector<std::size_t> Population::indices_of(const std::vector<std::string>& keys) const {
  std::vector<std::size_t> out;
  out.reserve(keys.size());
  for (const auto& key : keys) out.push_back(index_of(key));
  return out;
}

std::vector<std::string> Population::group_labels() const {
  std::set<std::string> labels;
  for (const auto& item : items_) labels.insert(item.group);
  return {labels.begin(), labels.end()};
}

// ---------------------------------------------------------------------------

ThetaDomain ThetaDomain::interval(Rational lo, Rational hi) {
  if (lo < 0 || hi > 1 || lo > hi) {
    throw ParameterError("scalar theta domain must satisfy 0 <= lo <= hi <= 1, got [" +
                         to_string(lo) + ", " + to_string(hi) + "]");
  }
  return ThetaDomain(Interval{std::move(lo), std::move(hi)});
}

ThetaDomain ThetaDomain::box(ThetaPoint lo, ThetaPoint hi) {
  if (lo.size() < 2 || lo.size() != hi.size()) {
    throw ParameterError("box theta domain needs matching bounds of dimension >= 2");
  }
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (lo[j] <= 0 || lo[j] > hi[j]) {
      throw ParameterError("box theta domain bounds must be positive with lo <= hi");
    }
  }
  return ThetaDomain(Box{std::move(lo), std::move(hi)});
}

ThetaDomain ThetaDomain::hull(std::vector<ThetaPoint> vertices) {
  if (vertices.empty()) throw ParameterError("hull theta domain needs at least one vertex");
  const std::size_t m = vertices.front().size();
  if (m < 2) throw ParameterError("hull theta domain needs dimension >= 2");
  for (const auto& v : vertices) {
    if (v.size() != m) throw ParameterError("hull vertices differ in dimension");
    for (const auto& x : v) {
      if (x <= 0) throw ParameterError("hull vertices must be strictly positive");
    }
  }
  return ThetaDomain(Hull{std::move(vertices)});
}

std::size_t ThetaDomain::dimension() const {
  if (is_interval()) return 1;
  if (const auto* b = as_box()) return b->lo.size();
  return as_hull()->vertices.front().size();
}

const Interval& ThetaDomain::as_interval() const {
  if (const auto* iv = std::get_if<Interval>(&shape_)) return *iv;
  throw ArgumentError("theta domain is not a scalar interval");
}

bool ThetaDomain::contains(const ThetaPoint& theta) const {
  if (theta.size() != dimension()) return false;
  if (const auto* iv = std::get_if<Interval>(&shape_)) return iv->contains(theta[0]);
  if (const auto* b = as_box()) {
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (theta[j] < b->lo[j] || theta[j] > b->hi[j]) return false;
    }
    return true;
  }
  throw ArgumentError("membership is not decided for hull domains");
}

// ---------------------------------------------------------------------------

Objective Objective::bind(const ObjectiveSpec& spec, const Schema& schema) {
  Objective obj;
  obj.kind_ = spec.kind;
  obj.spec_ = spec;
  if (spec.kind == MixtureKind::TwoAttribute && spec.attributes.size() != 2) {
    throw ConfigError("two-attribute mixture needs exactly two attributes");
  }
  if (spec.attributes.empty()) throw ConfigError("objective lists no attributes");
  for (const auto& name : spec.attributes) {
    const std::size_t col = schema.require(name);
    obj.columns_.push_back(col);
    obj.divisors_.push_back(schema.attributes[col].divisor);
  }
  return obj;
}

std::size_t Objective::theta_dimension() const {
  return kind_ == MixtureKind::TwoAttribute ? 1 : columns_.size();
}

void Objective::check_theta(const ThetaPoint& theta) const {
  if (theta.size() != theta_dimension()) {
    throw ParameterError("theta has dimension " + std::to_string(theta.size()) +
                         ", objective expects " + std::to_string(theta_dimension()));
  }
}

std::vector<Rational> Objective::sub_utilities(const ItemRecord& item) const {
  std::vector<Rational> out;
  out.reserve(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j] >= item.attributes.size()) {
      throw SchemaError("item '" + item.id + "' lacks attribute '" + spec_.attributes[j] + "'");
    }
    out.push_back(item.attributes[columns_[j]] / divisors_[j]);
  }
  return out;
}

std::vector<Rational> Objective::weights(const ThetaPoint& theta) const {
  check_theta(theta);
  if (kind_ == MixtureKind::TwoAttribute) return {theta[0], 1 - theta[0]};
  return theta;
}

Objective::Line Objective::line(const ItemRecord& item) const {
  if (theta_dimension() != 1) throw ArgumentError("line() needs a scalar-theta objective");
  const auto u = sub_utilities(item);
  if (kind_ == MixtureKind::TwoAttribute) return {u[1], u[0] - u[1]};
  return {Rational(0), u[0]};
}

namespace {
Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational sum = 0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum;
}
}  // namespace

Rational score_item(const ItemRecord& item, const Objective& objective, const ThetaPoint& theta) {
  const auto w = objective.weights(theta);
  return dot(w, objective.sub_utilities(item));
}

// ---------------------------------------------------------------------------

Selection Selection::make(const Population& population, const Objective& objective,
                          std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw SchemaError("selection lists an item twice");
  }
  Selection sel;
  sel.utility_.assign(objective.sub_utility_count(), Rational(0));
  for (const auto& label : population.group_labels()) sel.group_counts_[label] = 0;
  for (std::size_t idx : indices) {
    if (idx >= population.size()) throw SchemaError("selection index out of range");
    const auto& item = population.item(idx);
    sel.ids_.push_back(item.id);
    sel.names_.push_back(item.name.empty() ? item.id : item.name);
    const auto u = objective.sub_utilities(item);
    for (std::size_t j = 0; j < u.size(); ++j) sel.utility_[j] += u[j];
    ++sel.group_counts_[item.group];
  }
  sel.indices_ = std::move(indices);
  return sel;
}

Selection Selection::make(const Population& population, const Objective& objective,
                          const std::vector<std::string>& ids) {
  return make(population, objective, population.indices_of(ids));
}

std::string Selection::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) out += ", ";
    out += names_[i];
  }
  return out + "}";
}

Rational score_selection(const Selection& selection, const Objective& objective,
                         const ThetaPoint& theta) {
  const auto w = objective.weights(theta);
  if (selection.utility().size() != w.size()) {
    throw SchemaError("selection was built for a different objective");
  }
  return dot(w, selection.utility());
}

// ---------------------------------------------------------------------------

void FairnessSpec::validate(const Population& population) const {
  const auto labels = population.group_labels();
  auto require_label = [&](const std::string& label) {
    if (!std::binary_search(labels.begin(), labels.end(), label)) {
      throw SpecError("group label '" + label + "' does not occur in the population");
    }
  };
  if (mismatch) {
    if (mismatch->labels.size() < 2) throw SpecError("mismatch fairness needs at least two labels");
    for (const auto& l : mismatch->labels) require_label(l);
  }
  if (quota) {
    require_label(quota->label);
    if (quota->min_share < 0 || quota->min_share > 1) {
      throw SpecError("quota share must lie in [0,1]");
    }
  }
}

namespace {
std::size_t count_of(const Selection& selection, const std::string& label) {
  const auto& counts = selection.group_counts();
  auto it = counts.find(label);
  if (it == counts.end()) {
    throw SpecError("group label '" + label + "' does not occur in the population");
  }
  return it->second;
}
}  // namespace

Rational fairness_score(const Selection& selection, const FairnessSpec& spec) {
  if (!spec.mismatch) throw SpecError("no soft fairness criterion configured");
  const auto& labels = spec.mismatch->labels;
  if (labels.empty()) throw SpecError("mismatch fairness needs at least one label");
  std::size_t lo = count_of(selection, labels.front());
  std::size_t hi = lo;
  for (const auto& label : labels) {
    const std::size_t c = count_of(selection, label);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return -Rational(static_cast<long long>(hi - lo));
}

bool is_fair(const Selection& selection, const FairnessSpec& spec) {
  if (!spec.quota) throw SpecError("no hard fairness criterion configured");
  const std::size_t c = count_of(selection, spec.quota->label);
  if (selection.size() == 0) return true;
  return Rational(static_cast<long long>(c), static_cast<long long>(selection.size())) >=
         spec.quota->min_share;
}

}  // namespace noregret
