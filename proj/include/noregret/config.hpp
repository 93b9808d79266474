#pragma once

// Run configuration: one JSON file per reproducible run, with command-line
// overrides applied on top.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "noregret/continuous_solver.hpp"
#include "noregret/core_model.hpp"

namespace noregret {

using Json = nlohmann::ordered_json;

enum class Command { Solve, Sweep, Pareto, Compare, Ascent, Audit };
enum class Format { Json, Csv, Summary };

/// Throws ConfigError for unknown names.
Command parse_command(const std::string& name);
Format parse_format(const std::string& name);
const char* to_string(Command command);
const char* to_string(Format format);

/// Θ as written in the config; turned into a ThetaDomain once the objective
/// is known.
struct ThetaConfig {
  enum class Shape { Interval, Box, Hull };
  Shape shape = Shape::Interval;
  Rational lo{0};
  Rational hi{1};
  ThetaPoint box_lo, box_hi;
  std::vector<ThetaPoint> vertices;

  ThetaDomain domain() const;
  /// Interval midpoint, box centre, or vertex centroid.
  ThetaPoint center() const;
  friend bool operator==(const ThetaConfig&, const ThetaConfig&) = default;
};

struct AscentOptions {
  std::string problem = "quadratic-toy";
  AscentConfig config;
  /// Empty means the problem's default start.
  std::vector<double> s0;
  std::vector<double> theta0;
  /// Finite-difference step for the gradient audit.
  double epsilon = 1e-5;
};

struct RunConfig {
  std::string data;
  /// Unset: a two-attribute mixture of the first two attribute columns.
  std::optional<ObjectiveSpec> objective;
  std::map<std::string, Rational> divisors;
  std::optional<std::string> group_column;
  ThetaConfig theta;
  std::size_t k = 2;
  FairnessSpec fairness;
  /// θ for compare and audit; unset means the centre of Θ.
  std::optional<ThetaPoint> reference_theta;
  /// θ grid for sweep; empty means Θ's endpoints and midpoint.
  std::vector<Rational> sweep;
  std::size_t samples = 256;
  std::uint64_t seed = 1;
  AscentOptions ascent;
  Format format = Format::Json;
  std::optional<std::string> out;
  /// Adds wall-clock timing to the report (breaks byte-determinism).
  bool timing = false;
};

/// Unknown keys and malformed values raise ConfigError.
RunConfig config_from_json(const Json& json);
Json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

}  // namespace noregret
