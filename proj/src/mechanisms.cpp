#include "pseudodp/mechanisms.hpp"

#include <cmath>
#include <limits>

#include "pseudodp/errors.hpp"
#include "pseudodp/parallel.hpp"
#include "pseudodp/stats.hpp"

namespace pseudodp {

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::Unweighted: return "unweighted";
    case MechanismKind::AlphaWeighted: return "alpha_weighted";
    case MechanismKind::EmScalar: return "em_scalar";
  }
  return "unknown";
}

MechanismKind mechanism_from_string(const std::string& name) {
  if (name == "unweighted") return MechanismKind::Unweighted;
  if (name == "alpha_weighted") return MechanismKind::AlphaWeighted;
  if (name == "em_scalar") return MechanismKind::EmScalar;
  throw ConfigError("unknown mechanism: " + name);
}

namespace {

Weights unit_weights(std::size_t n) {
  Weights w;
  w.alpha.assign(n, 1.0);
  return w;
}

Weights constant_weights(std::size_t n, double value) {
  Weights w;
  w.alpha.assign(n, value);
  if (value == 0.0) {
    w.zeroed.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.zeroed[i] = i;
  }
  return w;
}

void require_all_finite(const LogLikMatrix& loglik, const char* what) {
  for (std::size_t i = 0; i < loglik.n_records; ++i) {
    if (!loglik.column_finite(i)) {
      throw NumericError(std::string(what) +
                         ": log-likelihood matrix has non-finite entries");
    }
  }
}

bool all_zero(const Weights& w) {
  for (double a : w.alpha) {
    if (a != 0.0) return false;
  }
  return true;
}

// Lipschitz accounting plus the m predictive databases, each generated from
// one distinct retained draw (its own RNG stream, so generation can run in
// parallel without changing the output).
SyntheticRelease assemble_release(MechanismKind kind, const Dataset& data,
                                  const ModelBackend& model, const PipelineConfig& config,
                                  RiskScores risk, Weights weights, ParamDraws release_draws,
                                  const LogLikMatrix* precomputed) {
  SyntheticRelease release;
  release.mechanism = kind;
  release.seed = config.seed;
  release.config = config;
  release.model_id = model.id();
  release.risk = std::move(risk);
  release.prior_predictive_fallback = all_zero(weights);

  LogLikMatrix raw = precomputed
                         ? *precomputed
                         : model.loglik_matrix(release_draws, data, config.workers);
  LogLikMatrix weighted = weighted_loglik_matrix(raw, weights);
  release.lipschitz = lipschitz_summary(weighted, config.m_databases);
  release.weights = std::move(weights);

  if (config.m_databases > release_draws.size()) {
    throw ConfigError("m_databases exceeds the number of retained draws");
  }
  Rng select_rng = make_rng(config.seed, {stream::kDrawSelect});
  release.draw_indices =
      sample_without_replacement(select_rng, release_draws.size(), config.m_databases);

  release.databases.resize(config.m_databases);
  parallel_for(config.m_databases, config.workers, [&](std::size_t db) {
    Rng rng = make_rng(config.seed, {stream::kPredict, db});
    release.databases[db] =
        model.predict_database(release_draws, release.draw_indices[db], data, rng);
  });
  return release;
}

}  // namespace

SyntheticRelease run_unweighted(const Dataset& data, const ModelBackend& model,
                                const PipelineConfig& config) {
  data.validate();
  Weights ones = unit_weights(data.size());
  FitOptions fit{config.s_draws, config.burn_in,
                 derive_seed(config.seed, {stream::kReleaseFit})};
  ParamDraws draws = model.fit(data, ones.alpha, fit);
  LogLikMatrix raw = model.loglik_matrix(draws, data, config.workers);
  require_all_finite(raw, "unweighted release");
  RiskScores risk = record_risk(raw);
  return assemble_release(MechanismKind::Unweighted, data, model, config, std::move(risk),
                          std::move(ones), std::move(draws), &raw);
}

SyntheticRelease run_alpha_weighted(const Dataset& data, const ModelBackend& model,
                                    const PipelineConfig& config) {
  data.validate();
  config.weights.validate();
  Weights ones = unit_weights(data.size());

  FitOptions stage1{config.s_draws, config.burn_in,
                    derive_seed(config.seed, {stream::kStage1Fit})};
  ParamDraws stage1_draws = model.fit(data, ones.alpha, stage1);
  LogLikMatrix stage1_loglik = model.loglik_matrix(stage1_draws, data, config.workers);

  RiskScores risk = record_risk(stage1_loglik);
  Weights weights = compute_weights(risk, config.weights);
  if (config.weights.m_threshold) {
    weights = apply_m_truncation(weights, risk, *config.weights.m_threshold);
  }

  if (config.harness_reuse_stage1) {
    return assemble_release(MechanismKind::AlphaWeighted, data, model, config,
                            std::move(risk), std::move(weights), std::move(stage1_draws),
                            &stage1_loglik);
  }
  FitOptions stage2{config.s_draws, config.burn_in,
                    derive_seed(config.seed, {stream::kReleaseFit})};
  ParamDraws release_draws = model.fit(data, weights.alpha, stage2);
  return assemble_release(MechanismKind::AlphaWeighted, data, model, config, std::move(risk),
                          std::move(weights), std::move(release_draws), nullptr);
}

SyntheticRelease run_em_scalar(const Dataset& data, const ModelBackend& model,
                               const PipelineConfig& config) {
  data.validate();
  if (!(config.epsilon_target > 0.0)) throw ConfigError("epsilon_target must be positive");

  FitOptions stage1{config.s_draws, config.burn_in,
                    derive_seed(config.seed, {stream::kStage1Fit})};
  Weights ones = unit_weights(data.size());
  ParamDraws stage1_draws = model.fit(data, ones.alpha, stage1);
  LogLikMatrix stage1_loglik = model.loglik_matrix(stage1_draws, data, config.workers);
  require_all_finite(stage1_loglik, "em scalar weight");
  const double delta_unweighted =
      lipschitz_summary(stage1_loglik, config.m_databases).delta_local;

  double w = em_scalar_weight(config.epsilon_target, delta_unweighted);
  const bool clamped = config.epsilon_target >= 2.0 * delta_unweighted;
  std::size_t iterations = 0;

  // One calibration evaluation: refit with the candidate scalar and measure
  // the achieved expenditure. In harness mode the stage-1 matrix is reused
  // and the answer is exact.
  struct EmEvaluation {
    double epsilon = 0.0;
    ParamDraws draws;
    LogLikMatrix loglik;
  };
  auto evaluate = [&](double scalar, std::uint64_t eval_index) {
    EmEvaluation eval;
    if (config.harness_reuse_stage1) {
      eval.draws = stage1_draws;
      eval.loglik = stage1_loglik;
    } else {
      FitOptions refit{config.s_draws, config.burn_in,
                       derive_seed(config.seed, {stream::kCalibrate, eval_index})};
      eval.draws = model.fit(data, constant_weights(data.size(), scalar).alpha, refit);
      eval.loglik = model.loglik_matrix(eval.draws, data, config.workers);
    }
    LogLikMatrix lw =
        weighted_loglik_matrix(eval.loglik, constant_weights(data.size(), scalar));
    eval.epsilon = lipschitz_summary(lw, config.m_databases).epsilon_per_db;
    return eval;
  };

  RiskScores risk = record_risk(stage1_loglik);
  SyntheticRelease release;
  if (config.calibrate && !clamped) {
    // 2*Delta grows with w to well within MC noise, so bracket and bisect.
    // The accepted evaluation's draws become the release fit, keeping the
    // reported Delta the calibrated one.
    double lo = 0.0, hi = 1.0;
    double best_w = w;
    double best_gap = std::numeric_limits<double>::infinity();
    EmEvaluation best;
    while (iterations < config.calibrate_max_iterations) {
      EmEvaluation eval = evaluate(w, iterations);
      ++iterations;
      const double achieved = eval.epsilon;
      const double gap = std::abs(achieved - config.epsilon_target);
      if (gap < best_gap) {
        best_gap = gap;
        best_w = w;
        best = std::move(eval);
      }
      if (best_gap <= config.calibrate_tolerance * config.epsilon_target) break;
      if (achieved > config.epsilon_target) {
        hi = w;
      } else {
        lo = w;
      }
      w = 0.5 * (lo + hi);
    }
    w = best_w;
    release = assemble_release(MechanismKind::EmScalar, data, model, config, std::move(risk),
                               constant_weights(data.size(), w), std::move(best.draws),
                               &best.loglik);
  } else if (config.harness_reuse_stage1) {
    release = assemble_release(MechanismKind::EmScalar, data, model, config, std::move(risk),
                               constant_weights(data.size(), w), std::move(stage1_draws),
                               &stage1_loglik);
  } else {
    FitOptions stage2{config.s_draws, config.burn_in,
                      derive_seed(config.seed, {stream::kReleaseFit})};
    Weights cw = constant_weights(data.size(), w);
    ParamDraws release_draws = model.fit(data, cw.alpha, stage2);
    release = assemble_release(MechanismKind::EmScalar, data, model, config, std::move(risk),
                               std::move(cw), std::move(release_draws), nullptr);
  }
  release.em_weight = w;
  release.em_iterations = iterations;
  release.em_weight_clamped = clamped;
  return release;
}

double flatness_diagnostic(const SyntheticRelease& release) {
  if (release.lipschitz.per_record.empty()) {
    throw NumericError("release carries no per-record Lipschitz values");
  }
  return interquartile_range(release.lipschitz.per_record);
}

}  // namespace pseudodp
