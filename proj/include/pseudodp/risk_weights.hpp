#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pseudodp {

/// S x n table of per-draw, per-record log-likelihood values. Entries are
/// signed natural-log densities; absolute values are taken where needed.
/// Non-finite entries (overflowed ratios, zero densities) are tolerated but
/// must be flagged in finite_mask so nothing propagates silently.
struct LogLikMatrix {
  std::size_t s_draws = 0;
  std::size_t n_records = 0;
  std::vector<double> values;            // row-major, s_draws x n_records
  std::vector<std::uint8_t> finite_mask; // 1 = finite

  double at(std::size_t s, std::size_t i) const { return values[s * n_records + i]; }
  bool finite_at(std::size_t s, std::size_t i) const {
    return finite_mask[s * n_records + i] != 0;
  }
  bool column_finite(std::size_t i) const;

  // Builds the matrix and derives finite_mask from the values.
  static LogLikMatrix from_values(std::size_t s_draws, std::size_t n_records,
                                  std::vector<double> values);
};

/// Per-record risk: f[i] is the max of |loglik| over draws, and scaled_risk
/// is its min-max rescaling to [0,1] over the finite records. Records with
/// any non-finite log-likelihood are flagged and carry scaled_risk = NaN;
/// their max_abs_loglik is +infinity.
struct RiskScores {
  std::vector<double> max_abs_loglik;  // f
  std::vector<double> scaled_risk;     // f~ in [0,1]; NaN for flagged records
  std::vector<std::size_t> nonfinite;  // sorted record indices

  std::size_t size() const { return max_abs_loglik.size(); }
};

/// Scale/shift configuration for the risk-to-weight map
/// alpha = clamp_[0,1](c * (1 - scaled_risk) + g), plus the optional
/// truncation threshold M applied to alpha * f.
struct WeightConfig {
  double c = 1.0;                      // scale, in (0, 1]
  double g = 0.0;                      // shift, typically <= 0
  std::optional<double> m_threshold;   // M > 0 when present

  void validate() const;
};

struct Weights {
  std::vector<double> alpha;           // each in [0, 1]
  WeightConfig config;
  std::vector<std::size_t> zeroed;     // forced to 0: non-finite or M-truncated

  std::size_t size() const { return alpha.size(); }
};

/// Local Lipschitz accounting for an m-database release: per-record bounds
/// max_s |alpha_i * loglik|, their maximum (the local Delta), and the
/// epsilon spent per database and in total (2 * Delta per released draw).
struct LipschitzSummary {
  std::vector<double> per_record;
  double delta_local = 0.0;
  double epsilon_per_db = 0.0;
  std::size_t m_databases = 1;
  double epsilon_total = 0.0;
};

/// Column-wise risk scores from a log-likelihood matrix.
/// Throws NumericError when every record has a non-finite contribution.
RiskScores record_risk(const LogLikMatrix& loglik);

/// alpha_i = clamp_[0,1](c * (1 - scaled_risk_i) + g); flagged records get
/// alpha = 0 and are recorded in zeroed.
Weights compute_weights(const RiskScores& risk, const WeightConfig& config);

/// Zeroes any weight whose weighted risk alpha_i * f_i exceeds m_threshold.
/// Records already at alpha = 0 stay 0 regardless of f_i.
Weights apply_m_truncation(const Weights& weights, const RiskScores& risk,
                           double m_threshold);

/// Entry-wise alpha_i * loglik(s, i). A zero weight removes the record's
/// contribution outright: the column becomes exactly 0 even where the input
/// is non-finite.
LogLikMatrix weighted_loglik_matrix(const LogLikMatrix& loglik, const Weights& weights);

/// Requires a fully finite matrix (weights already applied); throws
/// NumericError("apply weights first") otherwise.
LipschitzSummary lipschitz_summary(const LogLikMatrix& weighted, std::size_t m_databases);

/// Scalar weight w = epsilon_target / (2 * delta_unweighted), clamped to 1
/// when the target exceeds the unweighted expenditure.
double em_scalar_weight(double epsilon_target, double delta_unweighted);

/// Applies a multiplicative factor of safety to epsilon_total to turn the
/// local guarantee into a recommended global budget. The default factor is
/// 1.025 for n > 1000 and 1.075 otherwise; pass safety_factor to override.
double recommend_global_epsilon(const LipschitzSummary& summary, std::size_t n_records,
                                std::optional<double> safety_factor = std::nullopt);

}  // namespace pseudodp
