#include "noregret/config.hpp"

#include <fstream>
#include <set>

#include "noregret/errors.hpp"

namespace noregret {

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Solve, "solve"},     {Command::Sweep, "sweep"},   {Command::Pareto, "pareto"},
    {Command::Compare, "compare"}, {Command::Ascent, "ascent"}, {Command::Audit, "audit"},
};
constexpr std::pair<Format, const char*> kFormats[] = {
    {Format::Json, "json"}, {Format::Csv, "csv"}, {Format::Summary, "summary"}};

Rational rational(const Json& j, const std::string& key) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number()) return parse_rational(j.dump());
  } catch (const std::invalid_argument&) {
  }
  throw ConfigError("'" + key + "' must be a number or a \"p/q\" string");
}

ThetaPoint point(const Json& j, const std::string& key) {
  if (!j.is_array()) return {rational(j, key)};
  ThetaPoint out;
  for (const auto& v : j) out.push_back(rational(v, key));
  return out;
}

Json to_json(const ThetaPoint& p) {
  Json out = Json::array();
  for (const auto& v : p) out.push_back(to_string(v));
  return out;
}

template <typename T>
T get(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("'" + key + "' has the wrong type");
  }
}

void only_keys(const Json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

ThetaConfig theta_from_json(const Json& j) {
  ThetaConfig t;
  if (!j.is_object()) {
    t.lo = t.hi = rational(j, "theta");
    return t;
  }
  only_keys(j, "theta", {"lo", "hi", "point", "box", "hull"});
  if (j.contains("point")) {
    t.lo = t.hi = rational(j["point"], "theta.point");
  } else if (j.contains("box")) {
    only_keys(j["box"], "theta.box", {"lo", "hi"});
    t.shape = ThetaConfig::Shape::Box;
    t.box_lo = point(j["box"].value("lo", Json::array()), "theta.box.lo");
    t.box_hi = point(j["box"].value("hi", Json::array()), "theta.box.hi");
  } else if (j.contains("hull")) {
    t.shape = ThetaConfig::Shape::Hull;
    for (const auto& v : j["hull"]) t.vertices.push_back(point(v, "theta.hull"));
  } else {
    if (j.contains("lo")) t.lo = rational(j["lo"], "theta.lo");
    if (j.contains("hi")) t.hi = rational(j["hi"], "theta.hi");
  }
  return t;
}

Json theta_to_json(const ThetaConfig& t) {
  switch (t.shape) {
    case ThetaConfig::Shape::Interval: return Json{{"lo", to_string(t.lo)}, {"hi", to_string(t.hi)}};
    case ThetaConfig::Shape::Box:
      return Json{{"box", Json{{"lo", to_json(t.box_lo)}, {"hi", to_json(t.box_hi)}}}};
    case ThetaConfig::Shape::Hull: {
      Json vs = Json::array();
      for (const auto& v : t.vertices) vs.push_back(to_json(v));
      return Json{{"hull", vs}};
    }
  }
  return {};
}

std::vector<double> doubles(const Json& j, const std::string& key) {
  return get<std::vector<double>>(j, key);
}

}  // namespace

Command parse_command(const std::string& name) {
  for (auto [c, n] : kCommands) {
    if (name == n) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

Format parse_format(const std::string& name) {
  for (auto [f, n] : kFormats) {
    if (name == n) return f;
  }
  throw ConfigError("unknown format '" + name + "' (expected json, csv or summary)");
}

const char* to_string(Command command) {
  for (auto [c, n] : kCommands) {
    if (c == command) return n;
  }
  return "?";
}

const char* to_string(Format format) {
  for (auto [f, n] : kFormats) {
    if (f == format) return n;
  }
  return "?";
}

ThetaDomain ThetaConfig::domain() const {
  switch (shape) {
    case Shape::Interval: return ThetaDomain::interval(lo, hi);
    case Shape::Box: return ThetaDomain::box(box_lo, box_hi);
    case Shape::Hull: return ThetaDomain::hull(vertices);
  }
  throw ConfigError("bad theta shape");
}

ThetaPoint ThetaConfig::center() const {
  switch (shape) {
    case Shape::Interval: return {midpoint(lo, hi)};
    case Shape::Box: {
      ThetaPoint c;
      for (std::size_t j = 0; j < box_lo.size() && j < box_hi.size(); ++j) {
        c.push_back(midpoint(box_lo[j], box_hi[j]));
      }
      return c;
    }
    case Shape::Hull: {
      if (vertices.empty()) throw ConfigError("theta.hull has no vertices");
      ThetaPoint c(vertices.front().size());
      for (const auto& v : vertices) {
        for (std::size_t j = 0; j < c.size() && j < v.size(); ++j) c[j] += v[j];
      }
      for (auto& x : c) x /= static_cast<long long>(vertices.size());
      return c;
    }
  }
  return {};
}

RunConfig config_from_json(const Json& j) {
  only_keys(j, "config",
            {"data", "objective", "divisors", "group_column", "theta", "k", "fairness",
             "reference_theta", "sweep", "samples", "seed", "ascent", "format", "out", "timing"});
  RunConfig c;
  if (j.contains("data")) c.data = get<std::string>(j["data"], "data");
  if (j.contains("objective")) {
    const auto& o = j["objective"];
    only_keys(o, "objective", {"kind", "attributes"});
    const auto kind = get<std::string>(o.value("kind", Json("two_attribute")), "objective.kind");
    auto attrs = get<std::vector<std::string>>(o.value("attributes", Json::array()),
                                               "objective.attributes");
    if (kind == "two_attribute") {
      if (attrs.size() != 2) throw ConfigError("a two_attribute objective names exactly two attributes");
      c.objective = ObjectiveSpec::two_attribute(attrs[0], attrs[1]);
    } else if (kind == "linear") {
      if (attrs.empty()) throw ConfigError("a linear objective needs at least one attribute");
      c.objective = ObjectiveSpec::linear(attrs);
    } else {
      throw ConfigError("objective.kind must be two_attribute or linear");
    }
  }
  if (j.contains("divisors")) {
    if (!j["divisors"].is_object()) throw ConfigError("'divisors' must be an object");
    for (const auto& [name, v] : j["divisors"].items()) {
      c.divisors[name] = rational(v, "divisors." + name);
    }
  }
  if (j.contains("group_column")) c.group_column = get<std::string>(j["group_column"], "group_column");
  if (j.contains("theta")) c.theta = theta_from_json(j["theta"]);
  if (j.contains("k")) {
    const auto k = get<long long>(j["k"], "k");
    if (k < 1) throw ConfigError("k must be at least 1");
    c.k = static_cast<std::size_t>(k);
  }
  if (j.contains("fairness")) {
    const auto& f = j["fairness"];
    only_keys(f, "fairness", {"mismatch", "quota"});
    if (f.contains("mismatch")) {
      c.fairness.mismatch = MismatchFairness{get<std::vector<std::string>>(f["mismatch"], "fairness.mismatch")};
    }
    if (f.contains("quota")) {
      only_keys(f["quota"], "fairness.quota", {"label", "min_share"});
      c.fairness.quota = QuotaFairness{get<std::string>(f["quota"].value("label", Json()), "fairness.quota.label"),
                                       rational(f["quota"].value("min_share", Json()), "fairness.quota.min_share")};
    }
  }
  if (j.contains("reference_theta")) c.reference_theta = point(j["reference_theta"], "reference_theta");
  if (j.contains("sweep")) {
    for (const auto& v : j["sweep"]) c.sweep.push_back(rational(v, "sweep"));
  }
  if (j.contains("samples")) {
    const auto n = get<long long>(j["samples"], "samples");
    if (n < 1) throw ConfigError("samples must be at least 1");
    c.samples = static_cast<std::size_t>(n);
  }
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j["seed"], "seed");
  if (j.contains("ascent")) {
    const auto& a = j["ascent"];
    only_keys(a, "ascent", {"problem", "alpha", "beta", "max_iterations", "tolerance", "inner",
                            "gradient_at", "s0", "theta0", "epsilon"});
    auto& o = c.ascent;
    if (a.contains("problem")) o.problem = get<std::string>(a["problem"], "ascent.problem");
    if (a.contains("alpha")) o.config.alpha = get<double>(a["alpha"], "ascent.alpha");
    if (a.contains("beta")) o.config.beta = get<double>(a["beta"], "ascent.beta");
    if (a.contains("max_iterations")) {
      const auto n = get<long long>(a["max_iterations"], "ascent.max_iterations");
      if (n < 1) throw ConfigError("ascent.max_iterations must be at least 1");
      o.config.max_iterations = static_cast<std::size_t>(n);
    }
    if (a.contains("tolerance")) o.config.tolerance = get<double>(a["tolerance"], "ascent.tolerance");
    if (a.contains("inner")) {
      const auto v = get<std::string>(a["inner"], "ascent.inner");
      if (v != "gradient" && v != "exact") throw ConfigError("ascent.inner must be gradient or exact");
      o.config.inner = v == "exact" ? InnerMode::ExactSolve : InnerMode::GradientStep;
    }
    if (a.contains("gradient_at")) {
      const auto v = get<std::string>(a["gradient_at"], "ascent.gradient_at");
      if (v != "current" && v != "exact") throw ConfigError("ascent.gradient_at must be current or exact");
      o.config.gradient_at = v == "exact" ? OuterGradientAt::ExactOptimum : OuterGradientAt::CurrentIterate;
    }
    if (a.contains("s0")) o.s0 = doubles(a["s0"], "ascent.s0");
    if (a.contains("theta0")) o.theta0 = doubles(a["theta0"], "ascent.theta0");
    if (a.contains("epsilon")) o.epsilon = get<double>(a["epsilon"], "ascent.epsilon");
    try {
      o.config.validate();
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("ascent: ") + e.what());
    }
  }
  if (j.contains("format")) c.format = parse_format(get<std::string>(j["format"], "format"));
  if (j.contains("out") && !j["out"].is_null()) c.out = get<std::string>(j["out"], "out");
  if (j.contains("timing")) c.timing = get<bool>(j["timing"], "timing");
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["data"] = c.data;
  if (c.objective) {
    j["objective"] = {{"kind", c.objective->kind == MixtureKind::TwoAttribute ? "two_attribute" : "linear"},
                      {"attributes", c.objective->attributes}};
  }
  Json divisors = Json::object();
  for (const auto& [name, d] : c.divisors) divisors[name] = to_string(d);
  j["divisors"] = divisors;
  if (c.group_column) j["group_column"] = *c.group_column;
  j["theta"] = theta_to_json(c.theta);
  j["k"] = c.k;
  Json fairness = Json::object();
  if (c.fairness.mismatch) fairness["mismatch"] = c.fairness.mismatch->labels;
  if (c.fairness.quota) {
    fairness["quota"] = {{"label", c.fairness.quota->label},
                         {"min_share", to_string(c.fairness.quota->min_share)}};
  }
  j["fairness"] = fairness;
  if (c.reference_theta) j["reference_theta"] = to_json(*c.reference_theta);
  Json sweep = Json::array();
  for (const auto& v : c.sweep) sweep.push_back(to_string(v));
  j["sweep"] = sweep;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  const auto& a = c.ascent;
  j["ascent"] = {{"problem", a.problem},
                 {"alpha", a.config.alpha},
                 {"beta", a.config.beta},
                 {"max_iterations", a.config.max_iterations},
                 {"tolerance", a.config.tolerance},
                 {"inner", a.config.inner == InnerMode::ExactSolve ? "exact" : "gradient"},
                 {"gradient_at", a.config.gradient_at == OuterGradientAt::ExactOptimum ? "exact" : "current"},
                 {"s0", a.s0},
                 {"theta0", a.theta0},
                 {"epsilon", a.epsilon}};
  j["format"] = to_string(c.format);
  if (c.out) j["out"] = *c.out;
  j["timing"] = c.timing;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return config_from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace noregret
