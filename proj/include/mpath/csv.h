#pragma once

#include <string>
#include <vector>

namespace mpath {

// Comma-separated, '.' decimal, mandatory header, LF endings. Fields never
// contain commas, quotes or newlines, so no quoting is done.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string str() const;
};

// Strict reader for the same dialect. Throws ParseError (line, column).
CsvTable parse_csv(const std::string& text);

enum class ColumnType { kInt, kNumber, kText, kIdList };

struct CsvSchema {
  std::string file;
  std::vector<std::string> columns;
  std::vector<ColumnType> types;
};

// Every file the CLI writes.
const std::vector<CsvSchema>& csv_schemas();
const CsvSchema& csv_schema(const std::string& file);

// Header must match exactly; every cell must parse as its column type.
// Throws ParseError.
void validate_csv(const CsvTable& table, const CsvSchema& schema);

}  // namespace mpath
