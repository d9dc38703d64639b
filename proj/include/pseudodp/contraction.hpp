#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pseudodp/models.hpp"
#include "pseudodp/risk_weights.hpp"

namespace pseudodp {

enum class StudyMechanism { Unweighted, Weighted, WeightedM };

std::string to_string(StudyMechanism mechanism);

/// Monte Carlo study of local-to-global Lipschitz contraction: replicate
/// Poisson databases across a ladder of sample sizes and compare the local
/// Delta distributions of the unweighted, weighted, and M-truncated
/// mechanisms.
struct StudyConfig {
  std::vector<std::size_t> ns;  // strictly increasing sample sizes
  std::size_t replicates = 400;
  double mu = 100.0;
  double m_threshold = 3.5;
  std::vector<StudyMechanism> mechanisms = {StudyMechanism::Unweighted,
                                            StudyMechanism::Weighted,
                                            StudyMechanism::WeightedM};
  std::uint64_t seed = 0;
  std::size_t s_draws = 500;
  WeightConfig weights{1.0, 0.0, std::nullopt};  // alpha = 1 - scaled risk
  PoissonPrior prior;
  bool harness_reuse_stage1 = false;
  int workers = 1;

  void validate() const;
};

struct ReplicateOutcome {
  double delta = 0.0;    // local Lipschitz bound
  double mu_mean = 0.0;  // pseudo-posterior mean of mu
};

/// One replicate: a fresh Poisson database shared by the three mechanisms.
struct ReplicateResult {
  ReplicateOutcome unweighted;
  ReplicateOutcome weighted;
  ReplicateOutcome weighted_m;
};

ReplicateResult run_replicate(std::size_t n, const StudyConfig& config,
                              std::uint64_t replicate_seed);

struct DistributionSummary {
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double spread = 0.0;  // max - min
};

DistributionSummary summarize_distribution(const std::vector<double>& values);

struct StudyCell {
  std::size_t n = 0;
  StudyMechanism mechanism = StudyMechanism::Unweighted;
  std::vector<double> deltas;    // one per surviving replicate
  std::vector<double> mu_means;  // aligned with deltas
  DistributionSummary delta_summary;
  DistributionSummary mu_summary;
};

struct StudyResult {
  StudyConfig config;
  std::vector<StudyCell> cells;  // ordered by (n index, mechanism order)
  std::size_t failed_replicates = 0;

  const StudyCell& cell(std::size_t n, StudyMechanism mechanism) const;
};

/// R independent replicates per sample size, parallelized; deterministic
/// given the seed regardless of worker count. Failed replicates are dropped
/// and counted.
StudyResult run_study(const StudyConfig& config);

/// Per-(n, mechanism) distribution of pseudo-posterior mean-of-mu estimates;
/// the same engine as run_study, projected onto the utility axis.
StudyResult utility_drift(const StudyConfig& config);

}  // namespace pseudodp
