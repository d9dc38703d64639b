#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pseudodp/contraction.hpp"
#include "pseudodp/mechanisms.hpp"
#include "pseudodp/utility.hpp"

namespace pseudodp {

enum class Command { Synthesize, Sweep, Contraction };

/// Fully resolved run configuration. Parsed from a JSON config file with a
/// strict schema: unknown keys are rejected with their field path, and the
/// seed is mandatory (releases must be replayable, never wall-clock seeded).
struct RunConfig {
  Command command = Command::Synthesize;
  std::string model = "poisson";  // poisson | mixture
  MechanismKind mechanism = MechanismKind::Unweighted;
  std::string input;     // CSV path
  std::string response;  // response column name
  std::uint64_t seed = 0;
  std::size_t s_draws = 1000;
  std::size_t burn_in = 1000;
  std::size_t m_databases = 20;
  WeightConfig weights;
  std::optional<double> epsilon_target;
  bool calibrate = false;
  std::optional<double> safety_factor;
  bool harness_reuse_stage1 = false;
  PoissonPrior poisson_prior;
  MixtureOptions mixture_options;

  // sweep
  std::vector<SweepCell> grid;
  std::vector<StatSpec> stats;
  std::size_t bootstrap_b = 500;

  // contraction
  StudyConfig study;

  nlohmann::json resolved() const;  // full round-trippable snapshot

  PipelineConfig pipeline(int workers) const;
};

RunConfig parse_run_config(const nlohmann::json& root, Command command);

RunConfig load_run_config(const std::filesystem::path& path, Command command);

std::uint64_t fnv1a64(std::string_view bytes);

std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace pseudodp
