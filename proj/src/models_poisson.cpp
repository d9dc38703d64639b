#include <cmath>
#include <limits>

#include "pseudodp/errors.hpp"
#include "pseudodp/models.hpp"
#include "pseudodp/parallel.hpp"

namespace pseudodp {

LogLikMatrix ModelBackend::loglik_matrix(const ParamDraws& draws, const Dataset& data,
                                         int workers) const {
  const std::size_t s = draws.size();
  const std::size_t n = data.size();
  std::vector<double> values(s * n);
  parallel_for(s, workers, [&](std::size_t row) {
    for (std::size_t i = 0; i < n; ++i) {
      values[row * n + i] = loglik(draws, row, data, i);
    }
  });
  return LogLikMatrix::from_values(s, n, std::move(values));
}

std::vector<double> ModelBackend::predict_database(const ParamDraws& draws,
                                                   std::size_t draw_index,
                                                   const Dataset& data, Rng& rng) const {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = predict(draws, draw_index, data, i, rng);
  }
  return out;
}

namespace {

double checked_count(double y) {
  if (!(y >= 0.0) || std::abs(y - std::round(y)) > 1e-9) {
    throw DataError("poisson backend requires non-negative integer counts");
  }
  return std::round(y);
}

}  // namespace

double poisson_loglik(const PoissonMeanState& state, double count) {
  return count * std::log(state.mu) - state.mu - std::lgamma(count + 1.0);
}

ParamDraws PoissonBackend::fit(const Dataset& data, std::span<const double> alpha,
                               const FitOptions& options) const {
  data.validate();
  if (alpha.size() != data.size()) throw DataError("alpha length != record count");
  if (options.s_draws == 0) throw ConfigError("s_draws must be positive");

  double weighted_sum = 0.0;   // sum alpha_i y_i
  double weighted_size = 0.0;  // sum alpha_i
  for (std::size_t i = 0; i < data.size(); ++i) {
    weighted_sum += alpha[i] * checked_count(data.response[i]);
    weighted_size += alpha[i];
  }
  const double shape = prior_.shape + weighted_sum;
  const double rate = prior_.rate + weighted_size;
  if (!(shape > 0.0) || !(rate > 0.0)) throw NumericError("posterior improper");

  ParamDraws draws;
  draws.model_id = id();
  draws.seed = options.seed;
  draws.burn_in = 0;  // exact conjugate sampling, no chain to warm up
  draws.draws.reserve(options.s_draws);
  Rng rng(options.seed);
  std::gamma_distribution<double> gamma(shape, 1.0 / rate);
  for (std::size_t s = 0; s < options.s_draws; ++s) {
    draws.draws.push_back(PoissonMeanState{gamma(rng)});
  }
  return draws;
}

double PoissonBackend::loglik(const ParamDraws& draws, std::size_t draw_index,
                              const Dataset& data, std::size_t record_index) const {
  const auto& state = std::get<PoissonMeanState>(draws.draws[draw_index]);
  return poisson_loglik(state, data.response[record_index]);
}

double PoissonBackend::predict(const ParamDraws& draws, std::size_t draw_index,
                               const Dataset& /*data*/, std::size_t /*record_index*/,
                               Rng& rng) const {
  const auto& state = std::get<PoissonMeanState>(draws.draws[draw_index]);
  std::poisson_distribution<long> pois(state.mu);
  return static_cast<double>(pois(rng));
}

}  // namespace pseudodp
