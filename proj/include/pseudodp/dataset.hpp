#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pseudodp/errors.hpp"

namespace pseudodp {

/// Numeric view of a dataset: a response vector plus an optional row-major
/// n x r design matrix (already one-hot encoded, intercept included).
struct Dataset {
  std::vector<double> response;
  std::vector<double> design;  // empty when n_predictors == 0
  std::size_t n_predictors = 0;

  std::size_t size() const { return response.size(); }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(design.data() + i * n_predictors, n_predictors);
  }

  void validate() const {
    if (response.empty()) throw DataError("dataset is empty");
    if (n_predictors > 0 && design.size() != response.size() * n_predictors) {
      throw DataError("design matrix size does not match response length");
    }
  }
};

}  // namespace pseudodp
