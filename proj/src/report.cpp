#include "noregret/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "noregret/continuous_solver.hpp"
#include "noregret/discrete_solver.hpp"
#include "noregret/errors.hpp"
#include "noregret/ingest.hpp"
#include "noregret/pareto.hpp"
#include "noregret/uncertain_data.hpp"

namespace noregret {

// --- report structure --------------------------------------------------------

const Section& RunReport::section(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return s;
  }
  throw ArgumentError("report has no section '" + name + "'");
}

const std::string& RunReport::fact(const std::string& name) const {
  for (const auto& [key, value] : facts) {
    if (key == name) return value;
  }
  throw ArgumentError("report has no fact '" + name + "'");
}

Json RunReport::to_json() const {
  Json j;
  j["schema_version"] = schema_version;
  j["version"] = version;
  j["command"] = command;
  j["config"] = config;
  Json facts_json = Json::object();
  for (const auto& [key, value] : facts) facts_json[key] = value;
  Json sections_json = Json::array();
  for (const auto& s : sections) {
    sections_json.push_back({{"name", s.name}, {"columns", s.columns}, {"rows", s.rows}});
  }
  j["result"] = {{"facts", facts_json}, {"sections", sections_json}};
  if (elapsed_ms) j["timing"] = {{"elapsed_ms", *elapsed_ms}};
  return j;
}

RunReport RunReport::from_json(const Json& j) {
  try {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw ConfigError("unsupported report schema version " + std::to_string(r.schema_version));
    }
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    for (const auto& [key, value] : j.at("result").at("facts").items()) {
      r.facts.emplace_back(key, value.get<std::string>());
    }
    for (const auto& s : j.at("result").at("sections")) {
      r.sections.push_back({s.at("name").get<std::string>(),
                            s.at("columns").get<std::vector<std::string>>(),
                            s.at("rows").get<std::vector<std::vector<std::string>>>()});
    }
    if (j.contains("timing")) r.elapsed_ms = j["timing"].at("elapsed_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

// --- cell formatting ---------------------------------------------------------

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string cell(const Rational& v) { return to_string(v); }

std::string cell(const ThetaPoint& p) {
  std::vector<std::string> parts;
  for (const auto& v : p) parts.push_back(to_string(v));
  return join(parts);
}

/// Shortest of %.15g/%.16g/%.17g that reads back as the same double.
std::string cell(double v) {
  if (v == 0) v = 0;  // drop the sign of −0
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string cell(const Vector& v) {
  std::vector<std::string> parts;
  for (Eigen::Index i = 0; i < v.size(); ++i) parts.push_back(cell(v[i]));
  return join(parts);
}

std::string cell(bool b) { return b ? "true" : "false"; }

std::vector<std::string> members(const Selection& s) { return {join(s.ids()), join(s.names())}; }

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string describe(const ThetaConfig& t) {
  switch (t.shape) {
    case ThetaConfig::Shape::Interval: return "[" + cell(t.lo) + ", " + cell(t.hi) + "]";
    case ThetaConfig::Shape::Box: return "box [" + cell(t.box_lo) + "] .. [" + cell(t.box_hi) + "]";
    case ThetaConfig::Shape::Hull: {
      std::vector<std::string> vs;
      for (const auto& v : t.vertices) vs.push_back("(" + cell(v) + ")");
      return "hull " + join(vs, " ");
    }
  }
  return "";
}

// --- command implementations -------------------------------------------------

IngestOptions ingest_options(const RunConfig& c) { return {c.group_column, c.divisors}; }

void require_data(const RunConfig& c) {
  if (c.data.empty()) throw ConfigError("no data file given (--data or \"data\" in the config)");
}

Population population_of(const RunConfig& c) {
  require_data(c);
  return load_population(std::filesystem::path(c.data), ingest_options(c));
}

ObjectiveSpec objective_spec(const RunConfig& c, const Schema& schema) {
  if (c.objective) return *c.objective;
  if (schema.attributes.size() >= 2) {
    return ObjectiveSpec::two_attribute(schema.attributes[0].name, schema.attributes[1].name);
  }
  return ObjectiveSpec::linear({schema.attributes[0].name});
}

std::vector<std::string> attribute_columns(const Objective& objective) {
  std::vector<std::string> cols;
  for (const auto& a : objective.spec().attributes) cols.push_back("U_" + a);
  return cols;
}

Section selection_table(std::string name, const std::vector<Selection>& sels, const Objective& obj) {
  Section s{std::move(name), concat({"ids", "names"}, attribute_columns(obj)), {}};
  for (const auto& sel : sels) {
    auto row = members(sel);
    for (const auto& u : sel.utility()) row.push_back(cell(u));
    s.rows.push_back(std::move(row));
  }
  return s;
}

void add_fairest(RunReport& report, const std::vector<OptimalSetEntry>& entries,
                 const FairnessSpec& fairness, const Population& pop, const Objective& obj) {
  Section best{"fairest_optimal",
               {"ids", "names", "fairness", "theta_star", "region_lo", "region_hi", "utility", "regret"},
               {}};
  Section ties{"fairest_ties", {"ids", "names", "fairness", "region_lo", "region_hi"}, {}};
  if (fairness.mismatch) {
    const auto result = fairest_optimal(entries, fairness);
    // Regret at the winner's own θ*: zero by construction, computed rather than assumed.
    const auto top = top_k(pop, obj, result.theta_star, result.winner.size());
    const Rational regret = score_selection(top.front(), obj, result.theta_star) -
                            score_selection(result.winner, obj, result.theta_star);
    best.rows.push_back(concat(members(result.winner),
                               {cell(result.fairness), cell(result.theta_star),
                                result.region ? cell(result.region->lo) : "",
                                result.region ? cell(result.region->hi) : "", cell(result.utility),
                                cell(regret)}));
    for (const auto& t : result.tied) {
      ties.rows.push_back(concat(members(t.selection),
                                 {cell(result.fairness), t.region ? cell(t.region->lo) : "",
                                  t.region ? cell(t.region->hi) : ""}));
    }
    report.facts.emplace_back("fairest", result.winner.label());
    report.facts.emplace_back("fairest_fairness", cell(result.fairness));
  }
  report.sections.push_back(std::move(best));
  report.sections.push_back(std::move(ties));
}

void run_solve(const RunConfig& c, RunReport& report) {
  const auto pop = population_of(c);
  const auto obj = Objective::bind(objective_spec(c, pop.schema()), pop.schema());
  c.fairness.validate(pop);
  const auto domain = c.theta.domain();
  const bool exact = obj.theta_dimension() == 1 && domain.is_interval();
  const auto entries = exact ? enumerate_optimal_set(pop, obj, domain, c.k)
                             : sample_optimal_set(pop, obj, domain, c.k, c.samples, c.seed);

  report.facts = {{"items", std::to_string(pop.size())},
                  {"k", std::to_string(c.k)},
                  {"theta_domain", describe(c.theta)},
                  {"exact", cell(exact)},
                  {"optimal_set_size", std::to_string(entries.size())}};

  Section set{"theta_optimal_set",
              {"ids", "names", "region_lo", "region_hi", "representative", "utility", "witnesses"},
              {}};
  for (const auto& e : entries) {
    set.rows.push_back(concat(members(e.selection),
                              {e.region ? cell(e.region->lo) : "", e.region ? cell(e.region->hi) : "",
                               cell(e.representative), cell(e.utility),
                               std::to_string(e.witnesses.size())}));
  }
  Section changes{"change_points", {"theta"}, {}};
  if (exact) {
    for (const auto& t : change_points(entries, domain)) changes.rows.push_back({cell(t)});
  }
  report.sections.push_back(std::move(set));
  report.sections.push_back(std::move(changes));
  add_fairest(report, entries, c.fairness, pop, obj);
}

void run_sweep(const RunConfig& c, RunReport& report) {
  const auto pop = population_of(c);
  const auto obj = Objective::bind(objective_spec(c, pop.schema()), pop.schema());
  std::vector<Rational> thetas = c.sweep;
  if (thetas.empty()) {
    if (c.theta.shape != ThetaConfig::Shape::Interval) {
      throw ConfigError("sweep needs an explicit \"sweep\" list for a non-interval theta");
    }
    thetas = {c.theta.lo, midpoint(c.theta.lo, c.theta.hi), c.theta.hi};
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  }

  Section scores{"scores", {"theta", "id", "name", "group", "score"}, {}};
  Section optima{"optima", {"theta", "ids", "names", "utility"}, {}};
  std::vector<std::string> listed;
  for (const auto& t : thetas) {
    const ThetaPoint theta{t};
    obj.check_theta(theta);
    listed.push_back(cell(t));
    for (const auto& item : pop.items()) {
      scores.rows.push_back({cell(t), item.id, item.name, item.group, cell(score_item(item, obj, theta))});
    }
    for (const auto& sel : top_k(pop, obj, theta, c.k)) {
      optima.rows.push_back(concat({cell(t)}, concat(members(sel), {cell(score_selection(sel, obj, theta))})));
    }
  }
  report.facts = {{"items", std::to_string(pop.size())},
                  {"k", std::to_string(c.k)},
                  {"thetas", join(listed)}};
  report.sections.push_back(std::move(scores));
  report.sections.push_back(std::move(optima));
}

void run_pareto(const RunConfig& c, RunReport& report) {
  const auto pop = population_of(c);
  const auto obj = Objective::bind(objective_spec(c, pop.schema()), pop.schema());
  const auto front = front_report(pop, obj, c.theta.domain(), c.k, c.fairness);

  report.facts = {{"items", std::to_string(pop.size())},
                  {"k", std::to_string(c.k)},
                  {"theta_domain", describe(c.theta)},
                  {"all_inclusions_strict", cell(front.all_strict())}};
  for (std::size_t i = 0; i < FrontReport::kSectionNames.size(); ++i) {
    report.sections.push_back(selection_table(FrontReport::kSectionNames[i], front.section(i), obj));
  }
  Section chain{"chain", {"subset", "superset", "included", "strict"}, {}};
  for (const auto& l : front.links) chain.rows.push_back({l.subset, l.superset, cell(l.included), cell(l.strict)});
  report.sections.push_back(std::move(chain));
}

void run_compare(const RunConfig& c, RunReport& report) {
  const auto pop = population_of(c);
  const auto obj = Objective::bind(objective_spec(c, pop.schema()), pop.schema());
  c.fairness.validate(pop);
  const ThetaPoint theta = c.reference_theta.value_or(c.theta.center());
  obj.check_theta(theta);

  const auto optimal = top_k(pop, obj, theta, c.k);
  report.facts = {{"items", std::to_string(pop.size())},
                  {"k", std::to_string(c.k)},
                  {"theta_domain", describe(c.theta)},
                  {"reference_theta", cell(theta)},
                  {"optimal_utility", cell(score_selection(optimal.front(), obj, theta))}};

  Section unconstrained{"unconstrained_optimum", {"ids", "names", "utility"}, {}};
  for (const auto& s : optimal) {
    unconstrained.rows.push_back(concat(members(s), {cell(score_selection(s, obj, theta))}));
  }
  Section quota{"quota_optimum", {"ids", "names", "utility"}, {}};
  if (c.fairness.quota) {
    const auto r = regret(pop, obj, theta, c.k, c.fairness);
    for (const auto& s : r.fair_optimal) quota.rows.push_back(concat(members(s), {cell(r.fair_utility)}));
    report.facts.emplace_back("quota_utility", cell(r.fair_utility));
    report.facts.emplace_back("quota_regret", cell(r.regret));
    report.facts.emplace_back("quota_ties", std::to_string(r.fair_optimal.size()));
  }
  report.sections.push_back(std::move(unconstrained));
  report.sections.push_back(std::move(quota));

  if (c.fairness.mismatch) {
    const auto domain = c.theta.domain();
    const auto entries = obj.theta_dimension() == 1 && domain.is_interval()
                             ? enumerate_optimal_set(pop, obj, domain, c.k)
                             : sample_optimal_set(pop, obj, domain, c.k, c.samples, c.seed);
    add_fairest(report, entries, c.fairness, pop, obj);
    report.facts.emplace_back("fairest_regret", report.section("fairest_optimal").rows.front().back());
  } else {
    add_fairest(report, {}, c.fairness, pop, obj);
  }
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void run_ascent(const RunConfig& c, RunReport& report) {
  const auto& opts = c.ascent;
  SmoothProblem problem;
  Vector s0, theta0;
  if (opts.problem == "simplex-relaxation") {
    const auto pop = population_of(c);
    const auto obj = Objective::bind(objective_spec(c, pop.schema()), pop.schema());
    if (obj.kind() != MixtureKind::TwoAttribute) {
      throw ConfigError("simplex-relaxation needs a two-attribute objective");
    }
    if (!c.fairness.mismatch || c.fairness.mismatch->labels.size() != 2) {
      throw ConfigError("simplex-relaxation needs a two-label mismatch criterion");
    }
    c.fairness.validate(pop);
    std::vector<double> first, second;
    std::vector<int> sign;
    for (const auto& item : pop.items()) {
      const auto u = obj.sub_utilities(item);
      first.push_back(to_double(u[0]));
      second.push_back(to_double(u[1]));
      const auto& labels = c.fairness.mismatch->labels;
      sign.push_back(item.group == labels[0] ? 1 : item.group == labels[1] ? -1 : 0);
    }
    problem = simplex_relaxation(first, second, sign, static_cast<double>(c.k));
    s0 = Vector::Constant(static_cast<Eigen::Index>(pop.size()),
                          static_cast<double>(c.k) / static_cast<double>(pop.size()));
    theta0 = Vector::Constant(1, 0.5);
  } else {
    problem = make_problem(opts.problem);
    if (opts.problem == "quadratic-toy") {
      s0 = Vector::Zero(2);
      theta0 = Vector::Constant(1, 0.6);
    } else {
      s0 = Vector::Ones(2);
      theta0 = Vector::Ones(2);
    }
  }
  if (!opts.s0.empty()) s0 = to_vector(opts.s0);
  if (!opts.theta0.empty()) theta0 = to_vector(opts.theta0);
  if (static_cast<std::size_t>(s0.size()) != problem.solution_dim ||
      static_cast<std::size_t>(theta0.size()) != problem.theta_dim) {
    throw ConfigError("ascent start point has the wrong dimension for '" + problem.name + "'");
  }

  const auto trace = alternating_ascent(problem, opts.config, s0, theta0);
  if (trace.reason == Termination::SingularHessian) throw SingularHessianError(trace.message);

  const auto& last = trace.steps.back();
  report.facts = {{"problem", problem.name},
                  {"termination", to_string(trace.reason)},
                  {"iterations", std::to_string(last.iteration)},
                  {"final_theta", cell(last.theta)},
                  {"final_s", cell(last.s)},
                  {"final_utility", cell(last.utility)},
                  {"final_fairness", cell(last.fairness)}};
  if (problem.exact_inner) {
    const auto audit = finite_difference_audit(problem, last.theta, opts.epsilon);
    report.facts.emplace_back("audit_epsilon", cell(opts.epsilon));
    report.facts.emplace_back("audit_analytic_gradient", cell(audit.analytic));
    report.facts.emplace_back("audit_max_abs_deviation", cell(audit.max_abs_deviation));
  }
  Section steps{"trace", {"iteration", "s", "theta", "utility", "fairness"}, {}};
  for (const auto& st : trace.steps) {
    steps.rows.push_back({std::to_string(st.iteration), cell(st.s), cell(st.theta), cell(st.utility),
                          cell(st.fairness)});
  }
  report.sections.push_back(std::move(steps));
}

void run_audit(const RunConfig& c, RunReport& report) {
  require_data(c);
  const auto records = load_interval_population(std::filesystem::path(c.data), ingest_options(c));
  const auto spec = objective_spec(c, records.schema());
  const ThetaPoint theta = c.reference_theta.value_or(c.theta.center());
  const auto result = fairest_completion(records, spec, theta, c.k, c.fairness);

  report.facts = {{"warning", result.warning},
                  {"items", std::to_string(records.size())},
                  {"k", std::to_string(c.k)},
                  {"theta", cell(theta)},
                  {"uncertain_cells", std::to_string(records.uncertain_cells().size())},
                  {"completions_searched", std::to_string(result.completions_searched)},
                  {"selection", result.selection.label()},
                  {"fairness", cell(result.fairness)},
                  {"asymmetry", cell(result.audit.asymmetry)}};

  std::vector<std::string> cols = {"id", "name", "group"};
  for (const auto& a : records.schema().attributes) {
    cols.push_back(a.name);
    cols.push_back(a.name + "_interval");
    cols.push_back(a.name + "_position");
  }
  cols.push_back("position");
  Section completion{"completion", cols, {}};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records.records()[i];
    const auto& pos = result.audit.items[i];
    std::vector<std::string> row = {rec.id, rec.name, rec.group};
    for (std::size_t j = 0; j < rec.attributes.size(); ++j) {
      row.push_back(cell(result.completion.values[i][j]));
      row.push_back(cell(rec.attributes[j].lo) + ".." + cell(rec.attributes[j].hi));
      row.push_back(cell(pos.attribute_positions[j]));
    }
    row.push_back(cell(pos.position));
    completion.rows.push_back(std::move(row));
  }
  Section optimal{"optimal_selections", {"ids", "names", "fairness"}, {}};
  for (const auto& s : result.optimal) {
    optimal.rows.push_back(concat(members(s), {cell(fairness_score(s, c.fairness))}));
  }
  Section groups{"group_positions", {"group", "mean_position"}, {}};
  for (const auto& [g, m] : result.audit.group_means) groups.rows.push_back({g, cell(m)});
  report.sections.push_back(std::move(completion));
  report.sections.push_back(std::move(optimal));
  report.sections.push_back(std::move(groups));
}

// --- rendering ---------------------------------------------------------------

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void csv_table(std::ostringstream& out, const std::string& name, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  out << "# " << name << '\n';
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
}

/// Rationals become decimals; anything else passes through.
std::string decimal_text(const std::string& s) {
  if (s.find('/') == std::string::npos) return s;
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(s);
  while (std::getline(in, token, ';')) {
    try {
      parts.push_back(to_decimal(parse_rational(token)));
    } catch (const std::invalid_argument&) {
      return s;
    }
  }
  return join(parts);
}

std::string render_csv(const RunReport& r) {
  std::ostringstream out;
  std::vector<std::vector<std::string>> facts = {{"command", r.command}, {"version", r.version}};
  for (const auto& [k, v] : r.facts) facts.push_back({k, v});
  if (r.elapsed_ms) facts.push_back({"elapsed_ms", cell(*r.elapsed_ms)});
  csv_table(out, "facts", {"key", "value"}, facts);
  for (const auto& s : r.sections) {
    out << '\n';
    csv_table(out, s.name, s.columns, s.rows);
  }
  return out.str();
}

std::string render_summary(const RunReport& r) {
  std::ostringstream out;
  out << "noregret " << r.version << " — " << r.command << '\n';
  std::size_t key_width = 0;
  for (const auto& [k, v] : r.facts) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : r.facts) {
    out << "  " << k << std::string(key_width - k.size(), ' ') << "  " << decimal_text(v) << '\n';
  }
  for (const auto& s : r.sections) {
    out << "\n== " << s.name << " (" << s.rows.size() << (s.rows.size() == 1 ? " row" : " rows") << ")\n";
    std::vector<std::vector<std::string>> table = {s.columns};
    for (const auto& row : s.rows) {
      std::vector<std::string> converted;
      for (const auto& v : row) converted.push_back(decimal_text(v));
      table.push_back(std::move(converted));
    }
    std::vector<std::size_t> width(s.columns.size(), 0);
    for (const auto& row : table) {
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : table) {
      std::string line = " ";
      for (std::size_t i = 0; i < row.size(); ++i) {
        line += ' ' + row[i];
        if (i + 1 < row.size()) line += std::string(width[i] - row[i].size(), ' ');
      }
      out << line << '\n';
    }
  }
  if (r.elapsed_ms) out << "\nelapsed " << cell(*r.elapsed_ms) << " ms\n";
  return out.str();
}

}  // namespace

RunReport run(const RunConfig& config, Command command) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.command = to_string(command);
  report.config = config_to_json(config);
  // where the bytes go is not part of the result
  report.config.erase("out");
  switch (command) {
    case Command::Solve: run_solve(config, report); break;
    case Command::Sweep: run_sweep(config, report); break;
    case Command::Pareto: run_pareto(config, report); break;
    case Command::Compare: run_compare(config, report); break;
    case Command::Ascent: run_ascent(config, report); break;
    case Command::Audit: run_audit(config, report); break;
  }
  if (config.timing) {
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

std::string emit_report(const RunReport& report, Format format) {
  switch (format) {
    case Format::Json: return report.to_json().dump(2) + "\n";
    case Format::Csv: return render_csv(report);
    case Format::Summary: return render_summary(report);
  }
  throw ConfigError("unknown format");
}

std::string emit_report(const RunReport& report, const std::string& format) {
  return emit_report(report, parse_format(format));
}

void write_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(temp, ignored);
      throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw ConfigError("cannot move output into place at '" + path + "'");
  }
}

}  // namespace noregret
