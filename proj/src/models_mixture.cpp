#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pseudodp/errors.hpp"
#include "pseudodp/models.hpp"

namespace pseudodp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;

double log_normal_density(double y, double mean, double sd) {
  const double z = (y - mean) / sd;
  return -0.5 * (kLogTwoPi + z * z) - std::log(sd);
}

struct Standardization {
  double center = 0.0;
  double scale = 1.0;
};

Standardization standardize(std::span<const double> y) {
  Standardization s;
  const double n = static_cast<double>(y.size());
  s.center = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - s.center) * (v - s.center);
  s.scale = y.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  if (!(s.scale > 1e-12)) s.scale = 1.0;  // constant response: center only
  return s;
}

}  // namespace

double mixture_loglik(const MixtureRegressionState& state, double y_standardized,
                      std::span<const double> x) {
  const std::size_t k_count = state.n_components();
  const std::size_t r = x.size();
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    double mean = 0.0;
    const double* beta = state.beta.data() + k * r;
    for (std::size_t j = 0; j < r; ++j) mean += beta[j] * x[j];
    terms[k] = std::log(state.pi[k]) + log_normal_density(y_standardized, mean, state.sigma[k]);
    max_term = std::max(max_term, terms[k]);
  }
  if (!std::isfinite(max_term)) return max_term;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

ParamDraws MixtureBackend::fit(const Dataset& data, std::span<const double> alpha,
                               const FitOptions& fit_options) const {
  data.validate();
  if (data.n_predictors == 0) throw DataError("mixture backend requires a design matrix");
  if (alpha.size() != data.size()) throw DataError("alpha length != record count");
  if (options_.n_components == 0) throw ConfigError("mixture needs K >= 1");
  if (fit_options.s_draws == 0) throw ConfigError("s_draws must be positive");

  const std::size_t n = data.size();
  const std::size_t r = data.n_predictors;
  const std::size_t k_count = options_.n_components;

  const Standardization std_y = standardize(data.response);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (data.response[i] - std_y.center) / std_y.scale;
  }
  Eigen::MatrixXd x(n, r);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) x(i, j) = data.design[i * r + j];
  }

  Rng rng(fit_options.seed);
  std::normal_distribution<double> std_normal(0.0, 1.0);

  // State. Labels start as response-quantile bins, which mixes much faster
  // than uniform assignment on skewed data and stays seed-deterministic.
  std::vector<int> labels(n);
  {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    for (std::size_t pos = 0; pos < n; ++pos) {
      labels[order[pos]] = static_cast<int>((pos * k_count) / n);
    }
  }
  std::vector<double> pi(k_count, 1.0 / static_cast<double>(k_count));
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(k_count, r);
  std::vector<double> sigma(k_count, 1.0);

  const double prior_precision = 1.0 / (options_.beta_prior_sd * options_.beta_prior_sd);
  const double dir_base = options_.dirichlet_total / static_cast<double>(k_count);

  std::vector<double> log_weights(k_count);
  std::vector<double> weighted_count(k_count);
  Eigen::MatrixXd precision(r, r);
  Eigen::VectorXd xty(r);

  ParamDraws draws;
  draws.model_id = id();
  draws.seed = fit_options.seed;
  draws.burn_in = fit_options.burn_in;
  draws.response_center = std_y.center;
  draws.response_scale = std_y.scale;
  draws.draws.reserve(fit_options.s_draws);

  const std::size_t total_sweeps = fit_options.burn_in + fit_options.s_draws;
  for (std::size_t sweep = 0; sweep < total_sweeps; ++sweep) {
    // (i) labels: Pr(z_i = k) proportional to pi_k * N(y_i | x_i'beta_k, sigma_k)^alpha_i
    for (std::size_t i = 0; i < n; ++i) {
      double max_lw = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < k_count; ++k) {
        const double mean = x.row(i).dot(beta.row(k));
        log_weights[k] =
            std::log(pi[k]) + alpha[i] * log_normal_density(y[i], mean, sigma[k]);
        max_lw = std::max(max_lw, log_weights[k]);
      }
      double total = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        log_weights[k] = std::exp(log_weights[k] - max_lw);
        total += log_weights[k];
      }
      std::uniform_real_distribution<double> unif(0.0, total);
      double u = unif(rng);
      std::size_t pick = k_count - 1;
      for (std::size_t k = 0; k + 1 < k_count; ++k) {
        u -= log_weights[k];
        if (u < 0.0) {
          pick = k;
          break;
        }
      }
      labels[i] = static_cast<int>(pick);
    }

    // (ii) pi ~ Dirichlet(a/K + sum of alpha over each cluster)
    std::fill(weighted_count.begin(), weighted_count.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) weighted_count[labels[i]] += alpha[i];
    {
      std::vector<double> conc(k_count);
      for (std::size_t k = 0; k < k_count; ++k) conc[k] = dir_base + weighted_count[k];
      pi = dirichlet_draw(rng, conc);
    }

    // (iii) beta_k from the weighted-ridge conjugate update, (iv) sigma_k
    // from the weighted inverse-gamma update.
    for (std::size_t k = 0; k < k_count; ++k) {
      precision.setZero();
      precision.diagonal().setConstant(prior_precision);
      xty.setZero();
      const double inv_var = 1.0 / (sigma[k] * sigma[k]);
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != static_cast<int>(k) || alpha[i] == 0.0) continue;
        precision.selfadjointView<Eigen::Lower>().rankUpdate(x.row(i).transpose(),
                                                             alpha[i] * inv_var);
        xty.noalias() += (alpha[i] * inv_var * y[i]) * x.row(i).transpose();
      }
      Eigen::LLT<Eigen::MatrixXd> llt(precision.selfadjointView<Eigen::Lower>());
      if (llt.info() != Eigen::Success) throw NumericError("mixture precision not SPD");
      const Eigen::VectorXd mean = llt.solve(xty);
      Eigen::VectorXd z(r);
      for (std::size_t j = 0; j < r; ++j) z[j] = std_normal(rng);
      // beta = mean + L^-T z gives covariance (L L^T)^-1
      beta.row(k) = (mean + llt.matrixU().solve(z)).transpose();

      double wrss = 0.0;
      double wsize = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != static_cast<int>(k) || alpha[i] == 0.0) continue;
        const double resid = y[i] - x.row(i).dot(beta.row(k));
        wrss += alpha[i] * resid * resid;
        wsize += alpha[i];
      }
      const double shape = options_.sigma_prior_shape + 0.5 * wsize;
      const double rate = options_.sigma_prior_rate + 0.5 * wrss;
      sigma[k] = std::sqrt(inverse_gamma_draw(rng, shape, rate));
    }

    if (sweep >= fit_options.burn_in) {
      MixtureRegressionState state;
      state.pi = pi;
      state.sigma = sigma;
      state.labels = labels;
      state.beta.resize(k_count * r);
      for (std::size_t k = 0; k < k_count; ++k) {
        for (std::size_t j = 0; j < r; ++j) state.beta[k * r + j] = beta(k, j);
      }
      draws.draws.push_back(std::move(state));
    }
  }
  return draws;
}

double MixtureBackend::loglik(const ParamDraws& draws, std::size_t draw_index,
                              const Dataset& data, std::size_t record_index) const {
  const auto& state = std::get<MixtureRegressionState>(draws.draws[draw_index]);
  const double y_std =
      (data.response[record_index] - draws.response_center) / draws.response_scale;
  return mixture_loglik(state, y_std, data.row(record_index));
}

double MixtureBackend::predict(const ParamDraws& draws, std::size_t draw_index,
                               const Dataset& data, std::size_t record_index,
                               Rng& rng) const {
  if (data.n_predictors == 0) throw DataError("mixture prediction requires covariates");
  const auto& state = std::get<MixtureRegressionState>(draws.draws[draw_index]);
  const auto x = data.row(record_index);
  const std::size_t k = categorical_draw(rng, state.pi);
  const double* beta = state.beta.data() + k * data.n_predictors;
  double mean = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) mean += beta[j] * x[j];
  std::normal_distribution<double> noise(mean, state.sigma[k]);
  return draws.response_center + draws.response_scale * noise(rng);
}

}  // namespace pseudodp
