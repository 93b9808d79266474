#include "noregret/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>

#include "noregret/errors.hpp"

namespace noregret {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(std::move(cell)));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw IngestionError("line " + std::to_string(line_no) + ": unterminated quote");
  cells.push_back(trim(std::move(cell)));
  return cells;
}

std::optional<Rational> try_number(const std::string& cell) {
  try {
    return parse_rational(cell);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::optional<Interval> try_interval(const std::string& cell) {
  const auto dots = cell.find("..");
  if (dots == std::string::npos) {
    if (auto v = try_number(cell)) return Interval{*v, *v};
    return std::nullopt;
  }
  auto lo = try_number(trim(cell.substr(0, dots)));
  auto hi = try_number(trim(cell.substr(dots + 2)));
  if (!lo || !hi) return std::nullopt;
  return Interval{*lo, *hi};
}

std::string where(const CsvTable& t, std::size_t row, std::size_t col) {
  return "line " + std::to_string(t.lines[row]) + ", column '" + t.header[col] + "'";
}

/// Column roles shared by both dialects.
struct Layout {
  std::size_t id = 0;
  std::optional<std::size_t> name;
  std::size_t group = 0;
  std::vector<std::size_t> attributes;
  Schema schema;
};

template <typename IsValue>
Layout infer_layout(const CsvTable& t, const IngestOptions& options, IsValue is_value) {
  Layout layout;
  const auto& h = t.header;
  for (std::size_t c = 0; c < h.size(); ++c) {
    if (h[c].empty()) throw IngestionError("line 1: column " + std::to_string(c + 1) + " has no name");
    if (std::count(h.begin(), h.end(), h[c]) > 1) {
      throw IngestionError("line 1: duplicate column '" + h[c] + "'");
    }
  }
  const auto find_ci = [&](const std::string& wanted) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (lower(h[c]) == wanted) return c;
    }
    return std::nullopt;
  };
  layout.id = find_ci("id").value_or(0);
  layout.name = find_ci("name");
  if (layout.name == layout.id) layout.name.reset();

  std::vector<std::size_t> categorical;
  for (std::size_t c = 0; c < h.size(); ++c) {
    if (c == layout.id || c == layout.name) continue;
    const bool configured_group = options.group_column && *options.group_column == h[c];
    if (!configured_group && is_value(t.rows.front()[c])) {
      layout.attributes.push_back(c);
    } else {
      categorical.push_back(c);
    }
  }

  if (options.group_column) {
    auto it = std::find(h.begin(), h.end(), *options.group_column);
    if (it == h.end()) {
      throw IngestionError("group column '" + *options.group_column + "' is not in the header");
    }
    layout.group = static_cast<std::size_t>(it - h.begin());
  } else if (categorical.size() == 1) {
    layout.group = categorical.front();
  } else if (categorical.empty()) {
    throw IngestionError("no categorical column to use as the group column");
  } else {
    throw IngestionError("several categorical columns; configure group_column");
  }
  if (layout.attributes.empty()) throw IngestionError("no numeric attribute columns");

  layout.schema.group_column = h[layout.group];
  for (auto c : layout.attributes) layout.schema.attributes.push_back({h[c], Rational(1)});
  for (const auto& [name, divisor] : options.divisors) {
    const auto j = layout.schema.find(name);
    if (!j) throw ConfigError("divisor given for unknown attribute '" + name + "'");
    if (divisor <= 0) throw ConfigError("divisor for '" + name + "' must be positive");
    layout.schema.attributes[*j].divisor = divisor;
  }
  return layout;
}

void check_ids(const CsvTable& t, const Layout& layout) {
  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& id = t.rows[r][layout.id];
    if (id.empty()) throw IngestionError(where(t, r, layout.id) + ": empty id");
    if (!seen.insert(id).second) throw IngestionError(where(t, r, layout.id) + ": duplicate id '" + id + "'");
  }
}

CsvTable read_checked(std::istream& in) {
  CsvTable t = read_csv(in);
  if (t.rows.empty()) throw IngestionError("no data rows after the header");
  return t;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split_record(line, line_no);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw IngestionError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(t.header.size()) + " cells, found " +
                           std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.lines.push_back(line_no);
  }
  if (t.header.empty()) throw IngestionError("empty file: no header row");
  return t;
}

Population load_population(std::istream& in, const IngestOptions& options) {
  const CsvTable t = read_checked(in);
  const Layout layout =
      infer_layout(t, options, [](const std::string& cell) { return try_number(cell).has_value(); });
  check_ids(t, layout);

  std::vector<ItemRecord> items;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    ItemRecord item{row[layout.id], {}, row[layout.group], layout.name ? row[*layout.name] : ""};
    for (auto c : layout.attributes) {
      auto v = try_number(row[c]);
      if (!v) throw IngestionError(where(t, r, c) + ": '" + row[c] + "' is not a number");
      item.attributes.push_back(std::move(*v));
    }
    items.push_back(std::move(item));
  }
  return Population(layout.schema, std::move(items));
}

Population load_population(const std::filesystem::path& path, const IngestOptions& options) {
  auto in = open(path);
  return load_population(in, options);
}

IntervalPopulation load_interval_population(std::istream& in, const IngestOptions& options) {
  const CsvTable t = read_checked(in);
  const Layout layout = infer_layout(
      t, options, [](const std::string& cell) { return try_interval(cell).has_value(); });
  check_ids(t, layout);

  std::vector<IntervalRecord> records;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    IntervalRecord rec{row[layout.id], {}, row[layout.group], layout.name ? row[*layout.name] : ""};
    for (auto c : layout.attributes) {
      auto v = try_interval(row[c]);
      if (!v) throw IngestionError(where(t, r, c) + ": '" + row[c] + "' is not a value or lo..hi interval");
      if (v->lo > v->hi) throw IngestionError(where(t, r, c) + ": interval has lo > hi");
      rec.attributes.push_back(std::move(*v));
    }
    records.push_back(std::move(rec));
  }
  return IntervalPopulation(layout.schema, std::move(records));
}

IntervalPopulation load_interval_population(const std::filesystem::path& path,
                                            const IngestOptions& options) {
  auto in = open(path);
  return load_interval_population(in, options);
}

}  // namespace noregret
