#include "pseudodp/risk_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pseudodp/errors.hpp"

namespace pseudodp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

bool LogLikMatrix::column_finite(std::size_t i) const {
  for (std::size_t s = 0; s < s_draws; ++s) {
    if (!finite_at(s, i)) return false;
  }
  return true;
}

LogLikMatrix LogLikMatrix::from_values(std::size_t s_draws, std::size_t n_records,
                                       std::vector<double> values) {
  if (s_draws == 0 || n_records == 0) {
    throw NumericError("log-likelihood matrix must have S >= 1 and n >= 1");
  }
  if (values.size() != s_draws * n_records) {
    throw NumericError("log-likelihood matrix size mismatch");
  }
  LogLikMatrix m;
  m.s_draws = s_draws;
  m.n_records = n_records;
  m.values = std::move(values);
  m.finite_mask.resize(m.values.size());
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    m.finite_mask[k] = std::isfinite(m.values[k]) ? 1 : 0;
  }
  return m;
}

void WeightConfig::validate() const {
  if (!(c > 0.0) || c > 1.0) throw ConfigError("weight scale c must lie in (0, 1]");
  if (!std::isfinite(g)) throw ConfigError("weight shift g must be finite");
  if (m_threshold && !(*m_threshold > 0.0)) {
    throw ConfigError("truncation threshold M must be positive");
  }
}

RiskScores record_risk(const LogLikMatrix& loglik) {
  const std::size_t n = loglik.n_records;
  RiskScores risk;
  risk.max_abs_loglik.assign(n, 0.0);
  risk.scaled_risk.assign(n, kNaN);

  double fmin = kInf;
  double fmax = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (!loglik.column_finite(i)) {
      risk.max_abs_loglik[i] = kInf;
      risk.nonfinite.push_back(i);
      continue;
    }
    double f = 0.0;
    for (std::size_t s = 0; s < loglik.s_draws; ++s) {
      f = std::max(f, std::abs(loglik.at(s, i)));
    }
    risk.max_abs_loglik[i] = f;
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  if (risk.nonfinite.size() == n) {
    throw NumericError("no finite likelihood contributions");
  }

  // Min-max over finite records only; a degenerate pool (all f equal) maps
  // everyone to the lowest risk.
  const double span = fmax - fmin;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(risk.max_abs_loglik[i])) continue;
    risk.scaled_risk[i] = span > 0.0 ? (risk.max_abs_loglik[i] - fmin) / span : 0.0;
  }
  return risk;
}

Weights compute_weights(const RiskScores& risk, const WeightConfig& config) {
  config.validate();
  Weights w;
  w.config = config;
  w.alpha.assign(risk.size(), 0.0);
  for (std::size_t i = 0; i < risk.size(); ++i) {
    if (!std::isfinite(risk.max_abs_loglik[i])) {
      w.alpha[i] = 0.0;
      w.zeroed.push_back(i);
      continue;
    }
    double a = config.c * (1.0 - risk.scaled_risk[i]) + config.g;
    w.alpha[i] = std::clamp(a, 0.0, 1.0);
  }
  return w;
}

Weights apply_m_truncation(const Weights& weights, const RiskScores& risk,
                           double m_threshold) {
  if (!(m_threshold > 0.0)) throw ConfigError("truncation threshold M must be positive");
  if (weights.size() != risk.size()) {
    throw NumericError("weights and risk scores cover different record counts");
  }
  Weights out = weights;
  out.config.m_threshold = m_threshold;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.alpha[i] == 0.0) continue;  // absorbing, whatever f_i is
    if (out.alpha[i] * risk.max_abs_loglik[i] > m_threshold) {
      out.alpha[i] = 0.0;
      out.zeroed.push_back(i);
    }
  }
  std::sort(out.zeroed.begin(), out.zeroed.end());
  out.zeroed.erase(std::unique(out.zeroed.begin(), out.zeroed.end()), out.zeroed.end());
  return out;
}

LogLikMatrix weighted_loglik_matrix(const LogLikMatrix& loglik, const Weights& weights) {
  if (weights.size() != loglik.n_records) {
    throw NumericError("weights and log-likelihood matrix cover different record counts");
  }
  LogLikMatrix out;
  out.s_draws = loglik.s_draws;
  out.n_records = loglik.n_records;
  out.values.resize(loglik.values.size());
  out.finite_mask.resize(loglik.values.size());
  for (std::size_t s = 0; s < loglik.s_draws; ++s) {
    for (std::size_t i = 0; i < loglik.n_records; ++i) {
      const std::size_t k = s * loglik.n_records + i;
      const double a = weights.alpha[i];
      // alpha = 0 removes the contribution: exact zero, even for -inf input
      double v = a == 0.0 ? 0.0 : a * loglik.values[k];
      out.values[k] = v;
      out.finite_mask[k] = std::isfinite(v) ? 1 : 0;
    }
  }
  return out;
}

LipschitzSummary lipschitz_summary(const LogLikMatrix& weighted, std::size_t m_databases) {
  if (m_databases == 0) throw ConfigError("m_databases must be positive");
  LipschitzSummary s;
  s.per_record.assign(weighted.n_records, 0.0);
  for (std::size_t i = 0; i < weighted.n_records; ++i) {
    double d = 0.0;
    for (std::size_t r = 0; r < weighted.s_draws; ++r) {
      if (!weighted.finite_at(r, i)) throw NumericError("apply weights first");
      d = std::max(d, std::abs(weighted.at(r, i)));
    }
    s.per_record[i] = d;
    s.delta_local = std::max(s.delta_local, d);
  }
  s.epsilon_per_db = 2.0 * s.delta_local;
  s.m_databases = m_databases;
  s.epsilon_total = s.epsilon_per_db * static_cast<double>(m_databases);
  return s;
}

double em_scalar_weight(double epsilon_target, double delta_unweighted) {
  if (!(epsilon_target > 0.0)) throw ConfigError("epsilon target must be positive");
  if (!(delta_unweighted > 0.0)) throw ConfigError("unweighted Lipschitz bound must be positive");
  return std::min(1.0, epsilon_target / (2.0 * delta_unweighted));
}

double recommend_global_epsilon(const LipschitzSummary& summary, std::size_t n_records,
                                std::optional<double> safety_factor) {
  if (n_records == 0) throw ConfigError("n_records must be positive");
  double s = safety_factor.value_or(n_records > 1000 ? 1.025 : 1.075);
  if (!(s >= 1.0)) throw ConfigError("safety factor must be >= 1");
  return s * summary.epsilon_total;
}

}  // namespace pseudodp
