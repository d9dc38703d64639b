#include "pseudodp/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pseudodp/errors.hpp"

namespace pseudodp {

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError("column not found: " + name);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      if (!field.empty()) {
        throw DataError("line " + std::to_string(line_number) +
                        ": quote inside unquoted field");
      }
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) {
    throw DataError("line " + std::to_string(line_number) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string escape_csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

double parse_number(const std::string& field, std::size_t line_number,
                    const std::string& column) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(value)) {
    throw DataError("line " + std::to_string(line_number) + ": column '" + column +
                    "' is not a finite number: '" + field + "'");
  }
  return value;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path.string());

  CsvTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1) {
      table.header = split_csv_line(line, line_number);
      if (table.header.empty() || (table.header.size() == 1 && table.header[0].empty())) {
        throw DataError("line 1: header row is empty");
      }
      std::set<std::string> seen;
      for (const auto& name : table.header) {
        if (name.empty()) throw DataError("line 1: header has an empty column name");
        if (!seen.insert(name).second) {
          throw DataError("line 1: duplicate column name '" + name + "'");
        }
      }
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_csv_line(line, line_number);
    if (fields.size() != table.header.size()) {
      throw DataError("line " + std::to_string(line_number) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (line_number == 0) throw DataError("input file is empty (header row required)");
  if (table.rows.empty()) throw DataError("input file has a header but no data rows");
  return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + path.string());
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << escape_csv_field(table.header[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << escape_csv_field(row[i]);
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

EncodedDataset encode_dataset(const CsvTable& table, const std::string& response_column) {
  EncodedDataset encoded;
  encoded.response_column = response_column;
  std::size_t response_index;
  try {
    response_index = table.column_index(response_column);
  } catch (const DataError&) {
    // the configured name is wrong, not the data
    throw ConfigError("response column '" + response_column + "' not present in input");
  }

  const std::size_t n = table.rows.size();
  encoded.data.response.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    encoded.data.response[i] = parse_number(table.rows[i][response_index], i + 2,
                                            response_column);
  }

  // Lexicographically ordered levels per categorical column, first dropped.
  struct Column {
    std::size_t index;
    std::vector<std::string> levels;
  };
  std::vector<Column> columns;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == response_index) continue;
    Column col;
    col.index = c;
    std::set<std::string> levels;
    for (const auto& row : table.rows) levels.insert(row[c]);
    col.levels.assign(levels.begin(), levels.end());
    columns.push_back(std::move(col));
    encoded.predictor_columns.push_back(table.header[c]);
  }

  std::size_t r = 1;
  encoded.design_column_names.push_back("intercept");
  for (const auto& col : columns) {
    for (std::size_t l = 1; l < col.levels.size(); ++l) {
      encoded.design_column_names.push_back(table.header[col.index] + "=" + col.levels[l]);
    }
    r += col.levels.size() - 1;
  }

  encoded.data.n_predictors = r;
  encoded.data.design.assign(n * r, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = encoded.data.design.data() + i * r;
    row[0] = 1.0;
    std::size_t offset = 1;
    for (const auto& col : columns) {
      const std::string& value = table.rows[i][col.index];
      const auto it = std::lower_bound(col.levels.begin(), col.levels.end(), value);
      const std::size_t level = static_cast<std::size_t>(it - col.levels.begin());
      if (level > 0) row[offset + level - 1] = 1.0;
      offset += col.levels.size() - 1;
    }
  }
  return encoded;
}

CsvTable with_response(const CsvTable& table, const std::string& response_column,
                       const std::vector<double>& synthetic_response) {
  if (synthetic_response.size() != table.rows.size()) {
    throw DataError("synthetic response length does not match the input table");
  }
  const std::size_t response_index = table.column_index(response_column);
  CsvTable out = table;
  char buf[64];
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", synthetic_response[i]);
    out.rows[i][response_index] = buf;
  }
  return out;
}

}  // namespace pseudodp
