// Acceptance suite: runs every release-quality criterion end to end and
// prints one pass/fail line per criterion. Exit code 0 only if all pass.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "pseudodp/contraction.hpp"
#include "pseudodp/mechanisms.hpp"
#include "pseudodp/models.hpp"
#include "pseudodp/parallel.hpp"
#include "pseudodp/risk_weights.hpp"
#include "pseudodp/stats.hpp"
#include "pseudodp/utility.hpp"

using namespace pseudodp;

namespace {

struct Checker {
  bool ok = true;
  std::ostringstream notes;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes << "  FAILED: " << what << "\n";
    }
  }
  void note(const std::string& line) { notes << "  " << line << "\n"; }
};

Dataset counts(std::vector<double> y) {
  Dataset d;
  d.response = std::move(y);
  return d;
}

std::vector<double> poisson_sample(std::size_t n, double mu, std::uint64_t seed) {
  Rng rng(seed);
  std::poisson_distribution<long> pois(mu);
  std::vector<double> y(n);
  for (auto& v : y) v = static_cast<double>(pois(rng));
  return y;
}

// ---------------------------------------------------------------------------
// 1. Conjugacy oracle: sampler moments vs Gamma(a0 + sum alpha y, b0 + sum alpha)
bool criterion_conjugacy(Checker& check) {
  auto data = counts(poisson_sample(100, 100.0, 7001));
  PoissonBackend model;

  PipelineConfig config;
  config.s_draws = 400;
  config.burn_in = 0;
  config.m_databases = 1;
  config.seed = 7002;
  config.weights = WeightConfig{0.7, 0.0, std::nullopt};
  auto release = run_alpha_weighted(data, model, config);
  const std::vector<double>& alpha = release.weights.alpha;

  double shape = model.prior().shape, rate = model.prior().rate;
  for (std::size_t i = 0; i < data.size(); ++i) {
    shape += alpha[i] * data.response[i];
    rate += alpha[i] * 1.0;
  }
  const double oracle_mean = shape / rate;
  const double oracle_var = shape / (rate * rate);

  const std::size_t s = 10000;
  auto draws = model.fit(data, alpha, FitOptions{s, 0, 7003});
  std::vector<double> mu(s);
  for (std::size_t i = 0; i < s; ++i) mu[i] = std::get<PoissonMeanState>(draws.draws[i]).mu;
  const double sample_mean = mean(mu);
  const double sample_var = sample_variance(mu);

  const double se_mean = std::sqrt(oracle_var / static_cast<double>(s));
  // Var of the sample variance for Gamma: sigma^4 (2 + 6/shape) / S
  const double se_var =
      oracle_var * std::sqrt((2.0 + 6.0 / shape) / static_cast<double>(s));

  check.note("mean " + std::to_string(sample_mean) + " vs " + std::to_string(oracle_mean) +
             " (4 SE = " + std::to_string(4 * se_mean) + ")");
  check.note("var  " + std::to_string(sample_var) + " vs " + std::to_string(oracle_var) +
             " (4 SE = " + std::to_string(4 * se_var) + ")");
  check.require(std::abs(sample_mean - oracle_mean) <= 4.0 * se_mean,
                "sampler mean within 4 MC SEs of the conjugate oracle");
  check.require(std::abs(sample_var - oracle_var) <= 4.0 * se_var,
                "sampler variance within 4 MC SEs of the conjugate oracle");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 2. Identity reduction: alpha == 1 pipeline equals the unweighted pipeline
//    bit for bit under a shared seed.
bool criterion_identity(Checker& check) {
  auto data = counts(std::vector<double>(64, 12.0));  // equal risks -> alpha = 1
  PoissonBackend model;
  PipelineConfig config;
  config.s_draws = 512;
  config.burn_in = 0;
  config.m_databases = 8;
  config.seed = 9001;

  auto unweighted = run_unweighted(data, model, config);
  auto weighted_config = config;
  weighted_config.weights = WeightConfig{1.0, 0.0, std::nullopt};
  auto weighted = run_alpha_weighted(data, model, weighted_config);

  bool all_one = true;
  for (double a : weighted.weights.alpha) all_one = all_one && a == 1.0;
  check.require(all_one, "equal risks with c=1, g=0 produce alpha identically 1");
  check.require(weighted.lipschitz.delta_local == unweighted.lipschitz.delta_local,
                "Delta matches exactly");
  check.require(weighted.lipschitz.per_record == unweighted.lipschitz.per_record,
                "per-record bounds match exactly");

  // retained draws themselves are bit-identical (same data, alpha, stream)
  std::vector<double> ones(data.size(), 1.0);
  FitOptions fit{config.s_draws, 0, derive_seed(config.seed, {stream::kReleaseFit})};
  auto draws_a = model.fit(data, ones, fit);
  auto draws_b = model.fit(data, weighted.weights.alpha, fit);
  bool same_draws = draws_a.size() == draws_b.size();
  for (std::size_t i = 0; same_draws && i < draws_a.size(); ++i) {
    same_draws = std::get<PoissonMeanState>(draws_a.draws[i]).mu ==
                 std::get<PoissonMeanState>(draws_b.draws[i]).mu;
  }
  check.require(same_draws, "retained parameter draws are bit-identical");

  check.require(weighted.draw_indices == unweighted.draw_indices,
                "database draw selection matches");
  bool same_dbs = weighted.databases.size() == unweighted.databases.size();
  for (std::size_t db = 0; same_dbs && db < weighted.databases.size(); ++db) {
    same_dbs = weighted.databases[db] == unweighted.databases[db];
  }
  check.require(same_dbs, "synthetic records are bit-identical");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 3. Dominance on any fixed matrix + exact EM scaling, 200 random matrices.
bool criterion_dominance(Checker& check) {
  std::mt19937_64 rng(30003);
  std::uniform_real_distribution<double> value(-60.0, 60.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t s = 1 + static_cast<std::size_t>(unif(rng) * 7);
    const std::size_t n = 1 + static_cast<std::size_t>(unif(rng) * 11);
    std::vector<double> values(s * n);
    for (double& v : values) v = value(rng);
    auto matrix = LogLikMatrix::from_values(s, n, std::move(values));

    Weights ones;
    ones.alpha.assign(n, 1.0);
    const auto base = lipschitz_summary(weighted_loglik_matrix(matrix, ones), 1);

    Weights random_weights;
    random_weights.alpha.resize(n);
    for (auto& a : random_weights.alpha) a = unif(rng);
    const auto weighted = lipschitz_summary(weighted_loglik_matrix(matrix, random_weights), 1);
    if (weighted.delta_local > base.delta_local) {
      check.require(false, "weighted Delta exceeded unweighted Delta on trial " +
                               std::to_string(trial));
      return check.ok;
    }

    const double w = unif(rng);
    Weights scalar;
    scalar.alpha.assign(n, w);
    const auto em = lipschitz_summary(weighted_loglik_matrix(matrix, scalar), 1);
    if (em.delta_local != w * base.delta_local) {
      check.require(false, "EM Delta != w * unweighted Delta exactly on trial " +
                               std::to_string(trial));
      return check.ok;
    }
  }
  check.note("200 random matrices: dominance and exact EM scaling held");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 4. Weight contract on 200 random risk vectors and (c, g) grids.
bool criterion_weight_contract(Checker& check) {
  std::mt19937_64 rng(40004);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(unif(rng) * 20);
    RiskScores risk;
    risk.max_abs_loglik.resize(n);
    risk.scaled_risk.assign(n, std::numeric_limits<double>::quiet_NaN());
    double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (unif(rng) < 0.15) {
        risk.max_abs_loglik[i] = std::numeric_limits<double>::infinity();
        risk.nonfinite.push_back(i);
      } else {
        risk.max_abs_loglik[i] = 80.0 * unif(rng);
        fmin = std::min(fmin, risk.max_abs_loglik[i]);
        fmax = std::max(fmax, risk.max_abs_loglik[i]);
      }
    }
    if (risk.nonfinite.size() == n) continue;  // record_risk would refuse this
    const double span = fmax - fmin;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(risk.max_abs_loglik[i])) {
        risk.scaled_risk[i] = span > 0.0 ? (risk.max_abs_loglik[i] - fmin) / span : 0.0;
      }
    }

    for (double c : {0.3, 0.7, 1.0}) {
      for (double g : {-0.4, 0.0, 0.2}) {
        auto weights = compute_weights(risk, WeightConfig{c, g, std::nullopt});
        for (std::size_t i = 0; i < n; ++i) {
          if (weights.alpha[i] < 0.0 || weights.alpha[i] > 1.0) {
            check.require(false, "alpha out of [0,1]");
            return check.ok;
          }
        }
        for (std::size_t i : risk.nonfinite) {
          if (weights.alpha[i] != 0.0) {
            check.require(false, "non-finite record kept a positive weight");
            return check.ok;
          }
        }
        const double m_threshold = 0.5 + 40.0 * unif(rng);
        auto truncated = apply_m_truncation(weights, risk, m_threshold);
        for (std::size_t i = 0; i < n; ++i) {
          const bool bound = truncated.alpha[i] == 0.0 ||
                             truncated.alpha[i] * risk.max_abs_loglik[i] <= m_threshold;
          if (!bound) {
            check.require(false, "M-truncation bound violated");
            return check.ok;
          }
        }
      }
    }
  }
  check.note("200 random risk vectors x 9 (c, g) cells: contract held");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 5 & 6 share one scaled study run: ns = (100, 400, 1600), R = 50, mu = 100,
// M = 3.5.
const StudyResult& shared_study() {
  static const StudyResult result = [] {
    StudyConfig config;
    config.ns = {100, 400, 1600};
    config.replicates = 50;
    config.mu = 100.0;
    config.m_threshold = 3.5;
    config.seed = 50005;
    config.s_draws = 500;
    config.workers = 0;  // all cores
    return run_study(config);
  }();
  return result;
}

bool criterion_contraction(Checker& check) {
  const StudyResult& study = shared_study();
  check.require(study.failed_replicates == 0, "no replicate failures");

  const double m = 3.5;
  const auto& wm_1600 = study.cell(1600, StudyMechanism::WeightedM);
  const double wm_median = wm_1600.delta_summary.median;
  check.note("median Delta_WeightedM at n=1600: " + std::to_string(wm_median) +
             " (band [" + std::to_string(0.85 * m) + ", " + std::to_string(1.15 * m) + "])");
  check.require(wm_median >= 0.85 * m && wm_median <= 1.15 * m,
                "median WeightedM Delta at n=1600 inside the M band");

  for (std::size_t n : {100, 400, 1600}) {
    const double wm_spread = study.cell(n, StudyMechanism::WeightedM).delta_summary.spread;
    const double uw_spread = study.cell(n, StudyMechanism::Unweighted).delta_summary.spread;
    check.note("n=" + std::to_string(n) + ": spread WM " + std::to_string(wm_spread) +
               " vs UW " + std::to_string(uw_spread));
    check.require(wm_spread < uw_spread,
                  "spread(WeightedM) < spread(Unweighted) at n=" + std::to_string(n));
  }

  const double w_100 = study.cell(100, StudyMechanism::Weighted).delta_summary.spread;
  const double w_1600 = study.cell(1600, StudyMechanism::Weighted).delta_summary.spread;
  check.note("spread Weighted: n=100 " + std::to_string(w_100) + ", n=1600 " +
             std::to_string(w_1600));
  const double wm_100 = study.cell(100, StudyMechanism::WeightedM).delta_summary.spread;
  const double wm_1600_spread =
      study.cell(1600, StudyMechanism::WeightedM).delta_summary.spread;
  check.note("spread WeightedM across n (the arm whose min and max collapse onto M): "
             "n=100 " + std::to_string(wm_100) + ", n=1600 " +
             std::to_string(wm_1600_spread));
  check.require(w_1600 < w_100, "Weighted spread contracts from n=100 to n=1600");
  return check.ok;
}

bool criterion_utility_drift(Checker& check) {
  const StudyResult& study = shared_study();
  for (std::size_t n : {100, 400, 1600}) {
    const auto& cell = study.cell(n, StudyMechanism::Unweighted);
    const double center = mean(cell.mu_means);
    const double sd = std::sqrt(sample_variance(cell.mu_means));
    check.note("n=" + std::to_string(n) + ": unweighted mean-of-mu " +
               std::to_string(center) + " +- " + std::to_string(sd));
    check.require(std::abs(center - 100.0) <= 2.0 * sd,
                  "unweighted posterior-mean distribution centered at mu within 2 MC SEs "
                  "at n=" + std::to_string(n));
  }
  const double bias_uw =
      std::abs(study.cell(1600, StudyMechanism::Unweighted).mu_summary.median - 100.0);
  const double bias_wm =
      std::abs(study.cell(1600, StudyMechanism::WeightedM).mu_summary.median - 100.0);
  check.note("median |bias| at n=1600: unweighted " + std::to_string(bias_uw) +
             ", weighted-M " + std::to_string(bias_wm));
  check.require(bias_wm >= bias_uw,
                "WeightedM pays at least the Unweighted utility cost at n=1600");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 7. DP-vs-EM utility ordering on simulated survey data, 25 seeded runs,
//    run at the tight end of the (c, g) ladder where the matched-epsilon EM
//    must temper every record toward the worst-case scalar.
bool criterion_dp_vs_em(Checker& check) {
  const int runs = 25;
  struct RunOutcome {
    double delta_alpha = 0.0;
    double em_weight = 0.0;
    double alpha_error = 0.0;
    double em_error = 0.0;
    bool ok = false;
  };
  std::vector<RunOutcome> outcomes(runs);
  std::atomic<int> failures{0};

  parallel_for(runs, 0, [&](std::size_t run) {
    try {
      const std::uint64_t seed = 70007 + 131 * run;
      Dataset data = simulate_ce_like(2000, seed);

      MixtureOptions options;
      options.n_components = 10;
      MixtureBackend model(options);

      PipelineConfig config;
      config.s_draws = 250;
      config.burn_in = 250;
      config.m_databases = 20;
      config.seed = seed + 1;
      config.weights = WeightConfig{0.5, -0.3, std::nullopt};
      auto alpha_release = run_alpha_weighted(data, model, config);

      auto em_config = config;
      em_config.epsilon_target = alpha_release.lipschitz.epsilon_per_db;
      em_config.calibrate = true;  // 2% relative tolerance on 2 * Delta
      auto em_release = run_em_scalar(data, model, em_config);

      StatSpec q90;
      q90.kind = StatSpec::Kind::Quantile;
      q90.p = 0.9;
      q90.resamples = 500;
      const double real_q90 = statistic_value(data.response, q90);

      auto release_error = [&](const SyntheticRelease& release, std::uint64_t tag) {
        std::vector<std::vector<double>> dists(release.databases.size());
        for (std::size_t db = 0; db < release.databases.size(); ++db) {
          dists[db] = statistic_distribution(release.databases[db], q90,
                                             derive_seed(seed, {tag, db}));
        }
        return std::abs(median(barycenter(dists)) - real_q90);
      };
      RunOutcome& out = outcomes[run];
      out.delta_alpha = alpha_release.lipschitz.delta_local;
      out.em_weight = em_release.em_weight;
      out.alpha_error = release_error(alpha_release, 1);
      out.em_error = release_error(em_release, 2);
      out.ok = true;
    } catch (const std::exception&) {
      failures.fetch_add(1);
    }
  });

  int alpha_wins = 0;
  for (const auto& out : outcomes) {
    if (out.ok && out.alpha_error <= out.em_error) ++alpha_wins;
  }
  for (int run = 0; run < runs; ++run) {
    const auto& out = outcomes[run];
    char line[160];
    std::snprintf(line, sizeof(line),
                  "run %2d: delta_alpha=%6.3f w_em=%.4f err_alpha=%9.0f err_em=%10.0f %s",
                  run, out.delta_alpha, out.em_weight, out.alpha_error, out.em_error,
                  !out.ok ? "ERROR" : out.alpha_error <= out.em_error ? "win" : "loss");
    check.note(line);
  }
  check.note("alpha-weighted q90 error <= EM q90 error in " + std::to_string(alpha_wins) +
             "/" + std::to_string(runs) + " runs");
  check.require(failures.load() == 0, "all runs completed");
  check.require(alpha_wins * 5 >= runs * 4,
                "alpha-weighted beats EM on q90 utility in >= 80% of runs");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 8. Sweep monotonicity with shared stage-1 draws.
bool criterion_sweep_monotonicity(Checker& check) {
  Dataset data = simulate_ce_like(500, 80008);
  MixtureOptions options;
  options.n_components = 8;
  MixtureBackend model(options);

  PipelineConfig pipeline;
  pipeline.s_draws = 150;
  pipeline.burn_in = 150;
  pipeline.m_databases = 4;
  pipeline.seed = 80009;
  pipeline.harness_reuse_stage1 = true;  // all cells share the stage-1 draws
  pipeline.workers = 0;

  StatSpec mean_stat;
  mean_stat.resamples = 100;
  std::vector<SweepCell> grid = {{0.7, 0.0}, {0.6, 0.0}, {0.5, 0.0}, {0.5, -0.3}};
  auto sweep = risk_utility_sweep(data, model, grid, pipeline, {mean_stat});
  for (const auto& row : sweep.rows) {
    check.require(!row.failed, "sweep cell completed");
  }
  std::ostringstream deltas;
  for (const auto& row : sweep.rows) deltas << row.delta_local << " ";
  check.note("Delta across (0.7,0) (0.6,0) (0.5,0) (0.5,-0.3): " + deltas.str());
  check.require(sweep.rows[1].delta_local <= sweep.rows[0].delta_local,
                "Delta non-increasing from c=0.7 to c=0.6 at g=0");
  check.require(sweep.rows[2].delta_local <= sweep.rows[1].delta_local,
                "Delta non-increasing from c=0.6 to c=0.5 at g=0");
  check.require(sweep.rows[3].delta_local <= sweep.rows[2].delta_local,
                "Delta decreases further at g=-0.3");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 9. Barycenter correctness.
bool criterion_barycenter(Checker& check) {
  std::vector<double> v = {0.3, 0.1, 0.7, 0.2};
  std::vector<double> sorted_v = v;
  std::sort(sorted_v.begin(), sorted_v.end());
  for (std::size_t copies : {1u, 2u, 3u, 7u}) {
    std::vector<std::vector<double>> identical(copies, v);
    check.require(barycenter(identical) == sorted_v,
                  "idempotence exact for m=" + std::to_string(copies));
  }
  check.require(barycenter({{0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}}) ==
                    std::vector<double>{1.0, 1.0, 1.0},
                "two constant vectors average exactly");
  check.require(barycenter({{1.0, 3.0}, {2.0, 10.0}}) == std::vector<double>{1.5, 6.5},
                "sort-and-average example holds exactly");

  std::mt19937_64 rng(90009);
  std::uniform_real_distribution<double> unif(-50.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(unif(rng) + 50.0) % 6;
    const std::size_t b = 1 + static_cast<std::size_t>(unif(rng) + 50.0) % 24;
    std::vector<std::vector<double>> inputs(m, std::vector<double>(b));
    for (auto& dist : inputs) {
      for (double& x : dist) x = unif(rng);
    }
    auto bary = barycenter(inputs);
    for (auto& dist : inputs) std::sort(dist.begin(), dist.end());
    for (std::size_t i = 0; i < b; ++i) {
      double lo = inputs[0][i], hi = inputs[0][i];
      for (const auto& dist : inputs) {
        lo = std::min(lo, dist[i]);
        hi = std::max(hi, dist[i]);
      }
      if (bary[i] < lo - 1e-12 || bary[i] > hi + 1e-12) {
        check.require(false, "elementwise bounds violated on trial " + std::to_string(trial));
        return check.ok;
      }
    }
  }
  check.note("bounds held on 200 random inputs");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 10. Replayability: releases and studies replay identically, independent of
//     worker count.
bool criterion_replayability(Checker& check) {
  // alpha-weighted Poisson release
  auto data = counts(poisson_sample(200, 60.0, 100010));
  PoissonBackend model;
  PipelineConfig config;
  config.s_draws = 256;
  config.burn_in = 0;
  config.m_databases = 10;
  config.seed = 100011;
  config.weights = WeightConfig{0.7, -0.05, 4.0};

  config.workers = 1;
  auto serial = run_alpha_weighted(data, model, config);
  config.workers = 4;
  auto parallel = run_alpha_weighted(data, model, config);
  auto again = run_alpha_weighted(data, model, config);
  check.require(serial.databases == parallel.databases &&
                    serial.databases == again.databases,
                "poisson release databases identical across runs and workers");
  check.require(serial.lipschitz.per_record == parallel.lipschitz.per_record,
                "poisson release accounting identical");

  // mixture release
  Dataset ce = simulate_ce_like(150, 100012);
  MixtureOptions options;
  options.n_components = 4;
  MixtureBackend mixture(options);
  PipelineConfig mix_config;
  mix_config.s_draws = 40;
  mix_config.burn_in = 40;
  mix_config.m_databases = 5;
  mix_config.seed = 100013;
  mix_config.weights = WeightConfig{0.7, 0.0, std::nullopt};
  mix_config.workers = 1;
  auto mix_serial = run_alpha_weighted(ce, mixture, mix_config);
  mix_config.workers = 3;
  auto mix_parallel = run_alpha_weighted(ce, mixture, mix_config);
  check.require(mix_serial.databases == mix_parallel.databases,
                "mixture release databases identical across worker counts");

  // contraction study
  StudyConfig study;
  study.ns = {60, 120};
  study.replicates = 6;
  study.mu = 40.0;
  study.m_threshold = 3.5;
  study.seed = 100014;
  study.s_draws = 128;
  study.workers = 1;
  auto study_serial = run_study(study);
  study.workers = 4;
  auto study_parallel = run_study(study);
  bool same = study_serial.cells.size() == study_parallel.cells.size();
  for (std::size_t i = 0; same && i < study_serial.cells.size(); ++i) {
    same = study_serial.cells[i].deltas == study_parallel.cells[i].deltas &&
           study_serial.cells[i].mu_means == study_parallel.cells[i].mu_means;
  }
  check.require(same, "study replays identically across worker counts");
  return check.ok;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(Checker&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "conjugacy oracle (Poisson pseudo posterior moments)", criterion_conjugacy},
      {2, "identity reduction (alpha=1 equals unweighted bit-for-bit)", criterion_identity},
      {3, "dominance and exact EM scaling on fixed matrices", criterion_dominance},
      {4, "weight contract (range, non-finite zeroing, M bound)", criterion_weight_contract},
      {5, "contraction study (scaled ladder, M band, spread ordering)", criterion_contraction},
      {6, "utility drift (centering and WeightedM utility cost)", criterion_utility_drift},
      {7, "DP-vs-EM utility ordering at matched epsilon", criterion_dp_vs_em},
      {8, "sweep monotonicity with shared stage-1 draws", criterion_sweep_monotonicity},
      {9, "barycenter correctness (idempotence, examples, bounds)", criterion_barycenter},
      {10, "replayability across seeds and worker counts", criterion_replayability},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Checker check;
    bool ok = false;
    try {
      ok = criterion.run(check);
    } catch (const std::exception& e) {
      check.notes << "  exception: " << e.what() << "\n";
      ok = false;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.name, seconds);
    const std::string notes = check.notes.str();
    if (!notes.empty()) std::fputs(notes.c_str(), stdout);
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
