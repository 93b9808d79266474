#pragma once

// CSV ingestion. The dialect is comma-separated with a header row and
// optional double-quoted cells. The id column is `ID`/`id` (else the first
// column) and `name` is an optional display column. A column whose first
// cell is numeric is an attribute; the group column is the configured one or
// the only remaining categorical column. In interval mode attribute cells may
// be `lo..hi`.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noregret/core_model.hpp"
#include "noregret/uncertain_data.hpp"

namespace noregret {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based source line of each row (header is line 1 unless preceded by blanks).
  std::vector<std::size_t> lines;
};

/// Throws IngestionError on an empty input or an unterminated quote.
CsvTable read_csv(std::istream& in);

struct IngestOptions {
  std::optional<std::string> group_column;
  /// Divisor per attribute name; unlisted attributes keep divisor 1.
  std::map<std::string, Rational> divisors;
};

Population load_population(std::istream& in, const IngestOptions& options = {});
Population load_population(const std::filesystem::path& path, const IngestOptions& options = {});

IntervalPopulation load_interval_population(std::istream& in, const IngestOptions& options = {});
IntervalPopulation load_interval_population(const std::filesystem::path& path,
                                            const IngestOptions& options = {});

}  // namespace noregret
