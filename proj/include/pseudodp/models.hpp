#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pseudodp/dataset.hpp"
#include "pseudodp/risk_weights.hpp"
#include "pseudodp/rng.hpp"

namespace pseudodp {

struct PoissonMeanState {
  double mu = 1.0;  // Poisson rate, > 0
};

struct MixtureRegressionState {
  std::vector<double> pi;     // K mixture weights, sums to 1
  std::vector<double> beta;   // row-major K x R coefficients
  std::vector<double> sigma;  // K positive scales
  std::vector<int> labels;    // n component assignments in [0, K)

  std::size_t n_components() const { return pi.size(); }
  std::span<const double> beta_row(std::size_t k, std::size_t r) const {
    return std::span<const double>(beta.data() + k * r, r);
  }
};

using ParamState = std::variant<PoissonMeanState, MixtureRegressionState>;

/// Retained posterior (or pseudo-posterior) parameter draws for one backend.
struct ParamDraws {
  std::vector<ParamState> draws;  // post-burn-in only
  std::string model_id;
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  // Response standardization used by the mixture backend; identity for
  // backends that fit on the raw scale.
  double response_center = 0.0;
  double response_scale = 1.0;

  std::size_t size() const { return draws.size(); }
};

struct FitOptions {
  std::size_t s_draws = 1000;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
};

/// A pluggable Bayesian synthesizer: weighted-likelihood fitting, per-record
/// log-likelihood evaluation, and predictive record generation. A fit with
/// alpha = 1 everywhere is the ordinary unweighted posterior.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;

  virtual std::string id() const = 0;

  virtual ParamDraws fit(const Dataset& data, std::span<const double> alpha,
                         const FitOptions& options) const = 0;

  /// Deterministic given (draw, record).
  virtual double loglik(const ParamDraws& draws, std::size_t draw_index,
                        const Dataset& data, std::size_t record_index) const = 0;

  /// One synthetic response for the given record under one parameter draw.
  virtual double predict(const ParamDraws& draws, std::size_t draw_index,
                         const Dataset& data, std::size_t record_index, Rng& rng) const = 0;

  /// S x n matrix of loglik(draw, record); rows may be filled in parallel.
  LogLikMatrix loglik_matrix(const ParamDraws& draws, const Dataset& data,
                             int workers = 1) const;

  /// Full synthetic database (n records) from a single parameter draw.
  std::vector<double> predict_database(const ParamDraws& draws, std::size_t draw_index,
                                       const Dataset& data, Rng& rng) const;
};

struct PoissonPrior {
  double shape = 1.0;  // a0
  double rate = 1.0;   // b0
};

/// Poisson means model with a conjugate Gamma(a0, b0) prior. The weighted
/// pseudo posterior is Gamma(a0 + sum alpha_i y_i, b0 + sum alpha_i), so fit
/// returns exact independent draws and ignores burn-in.
class PoissonBackend final : public ModelBackend {
 public:
  explicit PoissonBackend(PoissonPrior prior = {}) : prior_(prior) {}

  std::string id() const override { return "poisson"; }
  ParamDraws fit(const Dataset& data, std::span<const double> alpha,
                 const FitOptions& options) const override;
  double loglik(const ParamDraws& draws, std::size_t draw_index, const Dataset& data,
                std::size_t record_index) const override;
  double predict(const ParamDraws& draws, std::size_t draw_index, const Dataset& data,
                 std::size_t record_index, Rng& rng) const override;

  const PoissonPrior& prior() const { return prior_; }

 private:
  PoissonPrior prior_;
};

double poisson_loglik(const PoissonMeanState& state, double count);

struct MixtureOptions {
  std::size_t n_components = 20;   // K, over-determined by default
  double beta_prior_sd = 10.0;     // beta_k ~ Normal(0, sd^2 I) on standardized y
  double sigma_prior_shape = 2.0;  // sigma_k^2 ~ InverseGamma(shape, rate)
  double sigma_prior_rate = 1.0;
  double dirichlet_total = 1.0;    // pi ~ Dirichlet(total/K, ..., total/K)
};

/// Finite mixture of normal regressions fit by Gibbs sampling with
/// alpha-weighted conjugate updates. The response is standardized
/// internally; log-likelihoods are reported on the standardized scale and
/// predictions are returned on the original scale.
class MixtureBackend final : public ModelBackend {
 public:
  explicit MixtureBackend(MixtureOptions options = {}) : options_(options) {}

  std::string id() const override { return "mixture"; }
  ParamDraws fit(const Dataset& data, std::span<const double> alpha,
                 const FitOptions& options) const override;
  double loglik(const ParamDraws& draws, std::size_t draw_index, const Dataset& data,
                std::size_t record_index) const override;
  double predict(const ParamDraws& draws, std::size_t draw_index, const Dataset& data,
                 std::size_t record_index, Rng& rng) const override;

  const MixtureOptions& options() const { return options_; }

 private:
  MixtureOptions options_;
};

/// Marginal-over-components log density ln sum_k pi_k Normal(y | x'beta_k,
/// sigma_k), evaluated on the standardized scale. Permutation-invariant: it
/// never conditions on the latent label.
double mixture_loglik(const MixtureRegressionState& state, double y_standardized,
                      std::span<const double> x);

}  // namespace pseudodp
