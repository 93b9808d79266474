#pragma once

// Command dispatch and machine-readable reports. Every command produces a
// RunReport: scalar facts plus named tables. The same report renders as JSON
// (rationals as "p/q" strings), CSV tables, or a plain-text summary.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noregret/config.hpp"

namespace noregret {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct Section {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  friend bool operator==(const Section&, const Section&) = default;
};

struct RunReport {
  std::string command;
  Json config;
  std::vector<std::pair<std::string, std::string>> facts;
  std::vector<Section> sections;
  std::optional<double> elapsed_ms;
  std::string version = kVersion;
  int schema_version = kReportSchemaVersion;

  /// Throws ArgumentError when absent.
  const Section& section(const std::string& name) const;
  const std::string& fact(const std::string& name) const;

  Json to_json() const;
  /// Throws ConfigError on a malformed document or a different schema version.
  static RunReport from_json(const Json& json);
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Runs one command end to end: ingestion, validation, solve, report.
RunReport run(const RunConfig& config, Command command);

std::string emit_report(const RunReport& report, Format format);
/// Throws ConfigError for an unknown format name.
std::string emit_report(const RunReport& report, const std::string& format);

/// Writes through a temporary file in the same directory and renames it into
/// place, so a failed run never leaves a partial file.
void write_atomic(const std::string& path, const std::string& bytes);

}  // namespace noregret
