// noregret — command-line front end.
//
//   noregret <solve|sweep|pareto|compare|ascent|audit> --data <csv> --config <json>
//            [--theta-lo x --theta-hi y --k n --format json|csv|summary --seed s --out file]

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "noregret/config.hpp"
#include "noregret/errors.hpp"
#include "noregret/report.hpp"

namespace {

int fail(int code, const std::string& message) {
  std::cerr << "noregret: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace noregret;

  CLI::App app{"Fairness without regret: θ-optimal sets, Pareto fronts and their audits"};
  app.set_version_flag("--version", kVersion);

  std::string command;
  std::optional<std::string> data, config_path, theta_lo, theta_hi, format, out, problem;
  std::optional<long long> k;
  std::optional<std::uint64_t> seed;
  bool timing = false;

  app.add_option("command", command, "solve | sweep | pareto | compare | ascent | audit")
      ->required()
      ->check(CLI::IsMember({"solve", "sweep", "pareto", "compare", "ascent", "audit"}));
  app.add_option("--data", data, "population CSV (lo..hi cells allowed for audit)");
  app.add_option("--config", config_path, "run configuration (JSON)");
  app.add_option("--theta-lo", theta_lo, "lower end of an interval Θ (\"p/q\" or decimal)");
  app.add_option("--theta-hi", theta_hi, "upper end of an interval Θ");
  app.add_option("--k", k, "selection size");
  app.add_option("--format", format, "json | csv | summary");
  app.add_option("--seed", seed, "seed for sampled domains");
  app.add_option("--out", out, "write the report here instead of stdout");
  app.add_option("--problem", problem, "registered smooth problem for ascent");
  app.add_flag("--timing", timing, "include wall-clock timing (not byte-deterministic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorKind::Config);
  }

  try {
    RunConfig config = config_path ? load_config(*config_path) : RunConfig{};
    if (data) config.data = *data;
    if (theta_lo || theta_hi) {
      if (config.theta.shape != ThetaConfig::Shape::Interval) {
        throw ConfigError("--theta-lo/--theta-hi need an interval theta in the config");
      }
      try {
        if (theta_lo) config.theta.lo = parse_rational(*theta_lo);
        if (theta_hi) config.theta.hi = parse_rational(*theta_hi);
      } catch (const std::invalid_argument&) {
        throw ConfigError("--theta-lo/--theta-hi must be numbers or \"p/q\"");
      }
    }
    if (k) {
      if (*k < 1) throw ConfigError("--k must be at least 1");
      config.k = static_cast<std::size_t>(*k);
    }
    if (format) config.format = parse_format(*format);
    if (seed) config.seed = *seed;
    if (out) config.out = *out;
    if (problem) config.ascent.problem = *problem;
    if (timing) config.timing = true;

    const RunReport report = run(config, parse_command(command));
    const std::string bytes = emit_report(report, config.format);
    if (config.out) {
      write_atomic(*config.out, bytes);
    } else {
      std::cout << bytes << std::flush;
    }
    return 0;
  } catch (const Error& e) {
    return fail(exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
}
