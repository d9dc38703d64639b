#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pseudodp/models.hpp"
#include "pseudodp/risk_weights.hpp"

namespace pseudodp {

enum class MechanismKind { Unweighted, AlphaWeighted, EmScalar };

std::string to_string(MechanismKind kind);
MechanismKind mechanism_from_string(const std::string& name);

struct PipelineConfig {
  std::size_t s_draws = 1000;
  std::size_t burn_in = 1000;
  std::size_t m_databases = 20;
  std::uint64_t seed = 0;
  WeightConfig weights;          // AlphaWeighted
  double epsilon_target = 0.0;   // EmScalar
  bool calibrate = false;        // EmScalar: bisect w until 2*Delta matches target
  double calibrate_tolerance = 0.02;
  std::size_t calibrate_max_iterations = 20;
  // Test harness: skip the stage-2 refit and reuse the stage-1 draws, which
  // makes the dominance identities exact on a shared matrix.
  bool harness_reuse_stage1 = false;
  int workers = 1;
};

/// m synthetic databases plus the provenance needed to replay the release.
struct SyntheticRelease {
  MechanismKind mechanism = MechanismKind::Unweighted;
  std::vector<std::vector<double>> databases;  // m x n synthetic responses
  LipschitzSummary lipschitz;
  RiskScores risk;           // stage-1 risk scores (release-draw risk for Unweighted)
  Weights weights;           // per-record alpha (constant vector for EM)
  double em_weight = 1.0;    // scalar w for EmScalar, 1 otherwise
  std::size_t em_iterations = 0;
  std::vector<std::size_t> draw_indices;  // which retained draw generated each database
  std::uint64_t seed = 0;
  PipelineConfig config;
  std::string model_id;
  bool prior_predictive_fallback = false;  // all alpha zero
  bool em_weight_clamped = false;          // epsilon target >= unweighted expenditure

  std::size_t n_records() const {
    return databases.empty() ? 0 : databases.front().size();
  }
};

SyntheticRelease run_unweighted(const Dataset& data, const ModelBackend& model,
                                const PipelineConfig& config);

/// Two-stage pipeline: unweighted fit -> risk scores -> weights (optional
/// M-truncation) -> refit -> Lipschitz accounting -> m predictive databases.
SyntheticRelease run_alpha_weighted(const Dataset& data, const ModelBackend& model,
                                    const PipelineConfig& config);

/// Scalar-weight pipeline: w = epsilon_target / (2 * Delta_unweighted), with
/// optional bisection so the achieved 2 * Delta matches the target.
SyntheticRelease run_em_scalar(const Dataset& data, const ModelBackend& model,
                               const PipelineConfig& config);

/// Interquartile range of the per-record Lipschitz bounds; a flatness score
/// for how uniformly a mechanism downweights.
double flatness_diagnostic(const SyntheticRelease& release);

}  // namespace pseudodp
