#include "pseudodp/contraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "pseudodp/errors.hpp"
#include "pseudodp/parallel.hpp"
#include "pseudodp/stats.hpp"

namespace pseudodp {

std::string to_string(StudyMechanism mechanism) {
  switch (mechanism) {
    case StudyMechanism::Unweighted: return "unweighted";
    case StudyMechanism::Weighted: return "weighted";
    case StudyMechanism::WeightedM: return "weighted_m";
  }
  return "unknown";
}

void StudyConfig::validate() const {
  if (ns.empty()) throw ConfigError("study needs at least one sample size");
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    if (ns[i] >= ns[i + 1]) throw ConfigError("study sample sizes must be strictly increasing");
  }
  if (ns.front() == 0) throw ConfigError("study sample sizes must be positive");
  if (replicates == 0) throw ConfigError("study needs at least one replicate");
  if (!(mu > 0.0)) throw ConfigError("poisson rate mu must be positive");
  if (!(m_threshold > 0.0)) throw ConfigError("truncation threshold M must be positive");
  if (mechanisms.empty()) throw ConfigError("study needs at least one mechanism");
  if (s_draws == 0) throw ConfigError("s_draws must be positive");
  weights.validate();
}

namespace {

double posterior_mu_mean(const ParamDraws& draws) {
  double total = 0.0;
  for (const auto& state : draws.draws) {
    total += std::get<PoissonMeanState>(state).mu;
  }
  return total / static_cast<double>(draws.size());
}

}  // namespace

ReplicateResult run_replicate(std::size_t n, const StudyConfig& config,
                              std::uint64_t replicate_seed) {
  PoissonBackend model(config.prior);

  // One Poisson database shared by all three mechanisms.
  Dataset data;
  data.response.resize(n);
  {
    Rng rng = make_rng(replicate_seed, {stream::kData});
    std::poisson_distribution<long> pois(config.mu);
    for (std::size_t i = 0; i < n; ++i) {
      data.response[i] = static_cast<double>(pois(rng));
    }
  }

  std::vector<double> ones(n, 1.0);
  FitOptions stage1{config.s_draws, 0, derive_seed(replicate_seed, {stream::kStage1Fit})};
  ParamDraws stage1_draws = model.fit(data, ones, stage1);
  LogLikMatrix stage1_loglik = model.loglik_matrix(stage1_draws, data);

  RiskScores risk = record_risk(stage1_loglik);
  Weights weighted = compute_weights(risk, config.weights);
  Weights truncated = apply_m_truncation(weighted, risk, config.m_threshold);

  ReplicateResult result;
  Weights unit;
  unit.alpha = ones;
  result.unweighted.delta =
      lipschitz_summary(weighted_loglik_matrix(stage1_loglik, unit), 1).delta_local;
  result.unweighted.mu_mean = posterior_mu_mean(stage1_draws);

  auto weighted_outcome = [&](const Weights& w, std::uint64_t fit_stream) {
    ReplicateOutcome out;
    if (config.harness_reuse_stage1) {
      out.delta =
          lipschitz_summary(weighted_loglik_matrix(stage1_loglik, w), 1).delta_local;
      out.mu_mean = result.unweighted.mu_mean;
      return out;
    }
    FitOptions refit{config.s_draws, 0, derive_seed(replicate_seed, {fit_stream})};
    ParamDraws draws = model.fit(data, w.alpha, refit);
    LogLikMatrix loglik = model.loglik_matrix(draws, data);
    out.delta = lipschitz_summary(weighted_loglik_matrix(loglik, w), 1).delta_local;
    out.mu_mean = posterior_mu_mean(draws);
    return out;
  };

  result.weighted = weighted_outcome(weighted, stream::kWeightedFit);
  // Inert truncation (M never binds) must reproduce the weighted mechanism
  // exactly, so reuse its outcome instead of refitting on a fresh stream.
  result.weighted_m = truncated.alpha == weighted.alpha
                          ? result.weighted
                          : weighted_outcome(truncated, stream::kTruncatedFit);
  return result;
}

DistributionSummary summarize_distribution(const std::vector<double>& values) {
  DistributionSummary s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.median = median(values);
  s.spread = s.max - s.min;
  return s;
}

const StudyCell& StudyResult::cell(std::size_t n, StudyMechanism mechanism) const {
  for (const auto& c : cells) {
    if (c.n == n && c.mechanism == mechanism) return c;
  }
  throw NumericError("study result has no cell for the requested (n, mechanism)");
}

StudyResult run_study(const StudyConfig& config) {
  config.validate();
  StudyResult result;
  result.config = config;

  const std::size_t n_sizes = config.ns.size();
  const std::size_t r = config.replicates;

  // Flat replicate grid; each replicate owns a seed derived from (study
  // seed, n index, replicate index) so scheduling cannot matter.
  std::vector<ReplicateResult> outcomes(n_sizes * r);
  std::vector<std::uint8_t> ok(n_sizes * r, 0);
  std::atomic<std::size_t> failures{0};

  parallel_for(n_sizes * r, config.workers, [&](std::size_t job) {
    const std::size_t n_index = job / r;
    const std::size_t rep = job % r;
    const std::uint64_t seed = derive_seed(config.seed, {n_index, rep});
    try {
      outcomes[job] = run_replicate(config.ns[n_index], config, seed);
      ok[job] = 1;
    } catch (const std::exception&) {
      failures.fetch_add(1, std::memory_order_relaxed);
    }
  });
  result.failed_replicates = failures.load();

  for (std::size_t n_index = 0; n_index < n_sizes; ++n_index) {
    for (StudyMechanism mechanism : config.mechanisms) {
      StudyCell cell;
      cell.n = config.ns[n_index];
      cell.mechanism = mechanism;
      for (std::size_t rep = 0; rep < r; ++rep) {
        const std::size_t job = n_index * r + rep;
        if (!ok[job]) continue;
        const ReplicateOutcome& out = mechanism == StudyMechanism::Unweighted
                                          ? outcomes[job].unweighted
                                          : mechanism == StudyMechanism::Weighted
                                                ? outcomes[job].weighted
                                                : outcomes[job].weighted_m;
        cell.deltas.push_back(out.delta);
        cell.mu_means.push_back(out.mu_mean);
      }
      cell.delta_summary = summarize_distribution(cell.deltas);
      cell.mu_summary = summarize_distribution(cell.mu_means);
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

StudyResult utility_drift(const StudyConfig& config) { return run_study(config); }

}  // namespace pseudodp
