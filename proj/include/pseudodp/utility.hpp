#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pseudodp/dataset.hpp"
#include "pseudodp/mechanisms.hpp"

namespace pseudodp {

/// A statistic to track through resampling: the mean or a quantile under the
/// fixed type-7 interpolation rule.
struct StatSpec {
  enum class Kind { Mean, Quantile };
  Kind kind = Kind::Mean;
  double p = 0.5;               // quantile level, in (0, 1)
  std::size_t resamples = 500;  // bootstrap count B

  void validate() const;
  std::string label() const;  // "mean" or "q90"-style
};

/// The statistic evaluated on the data itself (one resample's worth).
double statistic_value(std::span<const double> values, const StatSpec& spec);

/// B bootstrap resamples (size n with replacement), statistic per resample.
std::vector<double> statistic_distribution(std::span<const double> database,
                                           const StatSpec& spec, std::uint64_t seed);

/// 1-D Wasserstein barycenter by quantile averaging: sort each input vector
/// and average elementwise across the m sorted vectors.
std::vector<double> barycenter(const std::vector<std::vector<double>>& distributions);

struct SweepCell {
  double c = 1.0;
  double g = 0.0;
};

struct SweepStat {
  std::string stat;                 // label of the StatSpec
  double real_value = 0.0;          // statistic on the confidential data
  double synthetic_value = 0.0;     // median of the barycenter distribution
  double abs_error = 0.0;
  std::vector<double> barycenter_distribution;
};

struct SweepRow {
  double c = 1.0;
  double g = 0.0;
  double delta_local = 0.0;
  double epsilon_total = 0.0;
  std::vector<SweepStat> stats;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;        // one per (deduplicated) grid cell
  std::size_t duplicates_dropped = 0;
};

/// Runs run_alpha_weighted once per (c, g) cell, in parallel, and scores the
/// utility of each release as |barycenter median - confidential statistic|.
SweepResult risk_utility_sweep(const Dataset& data, const ModelBackend& model,
                               std::vector<SweepCell> grid, const PipelineConfig& pipeline,
                               const std::vector<StatSpec>& stats);

/// Stand-in for the confidential survey extract: a right-skewed, income-like
/// response with 10 categorical predictors, one-hot encoded with first-level
/// drop plus an intercept column. Generator constants are frozen (v1) so
/// downstream checks stay stable.
Dataset simulate_ce_like(std::size_t n, std::uint64_t seed);

/// Same simulation in raw categorical form, for CSV-level tooling.
struct CeLikeTable {
  std::vector<std::string> header;                 // 10 predictors + response
  std::vector<std::vector<std::string>> rows;
};
CeLikeTable simulate_ce_like_table(std::size_t n, std::uint64_t seed);

}  // namespace pseudodp
