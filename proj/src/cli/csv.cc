#include "mpath/csv.h"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "mpath/error.h"

namespace mpath {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

bool is_int(const std::string& s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && p == s.data() + s.size();
}

bool is_number(const std::string& s) {
  if (s == "inf") return true;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && p == s.data() + s.size() && std::isfinite(v);
}

bool is_id_list(const std::string& s) {
  if (s.empty()) return true;
  std::size_t start = 0;
  while (true) {
    std::size_t sp = s.find(' ', start);
    if (!is_int(s.substr(start, sp - start))) return false;
    if (sp == std::string::npos) return true;
    start = sp + 1;
  }
}

}  // namespace

void CsvTable::add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

std::string CsvTable::str() const {
  std::string out = join(header) + "\n";
  for (const auto& r : rows) out += join(r) + "\n";
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  if (text.empty()) throw ParseError(ErrorCode::kParseError, "empty csv", 1, 1);
  if (text.back() != '\n') {
    throw ParseError(ErrorCode::kParseError, "csv must end with a newline", 0, 0);
  }
  std::size_t start = 0;
  int line = 0;
  while (start < text.size()) {
    ++line;
    std::size_t nl = text.find('\n', start);
    std::string row = text.substr(start, nl - start);
    start = nl + 1;
    std::size_t bad = row.find_first_of("\r\"");
    if (bad != std::string::npos) {
      throw ParseError(ErrorCode::kParseError, "CR or quote in csv",
                       line, static_cast<int>(bad) + 1);
    }
    std::vector<std::string> cells = split(row);
    if (line == 1) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ParseError(ErrorCode::kParseError,
                       fmt::format("expected {} fields, got {}", t.header.size(), cells.size()),
                       line, 1);
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

const std::vector<CsvSchema>& csv_schemas() {
  using T = ColumnType;
  static const std::vector<CsvSchema> kSchemas = {
      {"allocation.csv", {"demand_id", "link_src", "link_dst", "rate_bps"},
       {T::kInt, T::kInt, T::kInt, T::kNumber}},
      {"satisfaction.csv", {"demand_id", "peak_bps", "rate_bps", "satisfaction"},
       {T::kInt, T::kNumber, T::kNumber, T::kNumber}},
      {"trace.csv", {"iteration", "z_bps", "frozen_ids"}, {T::kInt, T::kNumber, T::kIdList}},
      {"joint.csv", {"mode", "demand_id", "path_index", "hops", "rate_bps"},
       {T::kText, T::kInt, T::kInt, T::kInt, T::kNumber}},
      {"joint_summary.csv",
       {"mode", "objective", "gcr", "iterations", "converged", "kkt_residual"},
       {T::kText, T::kNumber, T::kNumber, T::kInt, T::kInt, T::kNumber}},
      {"sweep.csv", {"ratio", "demand_id", "path_index", "rate_bps", "mode", "gcr"},
       {T::kNumber, T::kInt, T::kInt, T::kNumber, T::kText, T::kNumber}},
      {"timeseries.csv", {"t_s", "demand_id", "path_index", "rate_bps"},
       {T::kNumber, T::kInt, T::kInt, T::kNumber}},
      {"validation.csv", {"demand_id", "path_index", "kappa", "q", "r", "s"},
       {T::kInt, T::kInt, T::kNumber, T::kNumber, T::kNumber, T::kNumber}},
      {"optimum.csv", {"t_start_s", "t_end_s", "demand_id", "path_index", "rate_bps"},
       {T::kNumber, T::kNumber, T::kInt, T::kInt, T::kNumber}},
      {"report.csv", {"run_id", "scheme", "demand_id", "peak_bps", "rate_bps", "satisfaction"},
       {T::kInt, T::kText, T::kInt, T::kNumber, T::kNumber, T::kNumber}},
      {"summary.csv", {"scheme", "mean_carried_bps", "gain", "satisfaction_variance"},
       {T::kText, T::kNumber, T::kNumber, T::kNumber}},
      {"deciles.csv", {"decile", "scheme", "mean_satisfaction", "variance"},
       {T::kInt, T::kText, T::kNumber, T::kNumber}},
  };
  return kSchemas;
}

const CsvSchema& csv_schema(const std::string& file) {
  for (const CsvSchema& s : csv_schemas()) {
    if (s.file == file) return s;
  }
  throw Error(ErrorCode::kInvalidConfig, fmt::format("no schema for {}", file));
}

void validate_csv(const CsvTable& table, const CsvSchema& schema) {
  if (table.header != schema.columns) {
    throw ParseError(ErrorCode::kParseError,
                     fmt::format("{}: header is not {}", schema.file, join(schema.columns)), 1, 1);
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < schema.types.size(); ++c) {
      const std::string& cell = table.rows[r][c];
      bool ok = true;
      switch (schema.types[c]) {
        case ColumnType::kInt: ok = is_int(cell); break;
        case ColumnType::kNumber: ok = is_number(cell); break;
        case ColumnType::kText: ok = !cell.empty(); break;
        case ColumnType::kIdList: ok = is_id_list(cell); break;
      }
      if (!ok) {
        throw ParseError(ErrorCode::kParseError,
                         fmt::format("{}: bad {} value '{}'", schema.file, schema.columns[c], cell),
                         static_cast<int>(r) + 2, static_cast<int>(c) + 1);
      }
    }
  }
}

}  // namespace mpath
