#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pseudodp/dataset.hpp"

namespace pseudodp {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;  // throws DataError
};

/// UTF-8 CSV with a mandatory header row. Handles double-quoted fields;
/// malformed rows raise line-numbered DataErrors.
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Dataset assembled from a CSV: the named response column becomes numeric,
/// every other column is treated as categorical and one-hot encoded with
/// lexicographic level order, first level dropped, intercept prepended.
struct EncodedDataset {
  Dataset data;
  std::string response_column;
  std::vector<std::string> predictor_columns;     // original categorical columns
  std::vector<std::string> design_column_names;   // intercept + dummies
};

EncodedDataset encode_dataset(const CsvTable& table, const std::string& response_column);

/// Rewrites the table with the response column replaced by synthetic values,
/// preserving every predictor column. Keeps the synthetic release
/// re-ingestable through read_csv/encode_dataset.
CsvTable with_response(const CsvTable& table, const std::string& response_column,
                       const std::vector<double>& synthetic_response);

}  // namespace pseudodp
