#include "pseudodp/report.hpp"

#include <fstream>
#include <sstream>

#include "pseudodp/errors.hpp"
#include "pseudodp/stats.hpp"

namespace pseudodp {

namespace {

constexpr const char* kPdpCaveat =
    "The stated epsilon is a local guarantee computed on the observed database: the "
    "release is (epsilon, pi)-probabilistically differentially private (pDP), where pi "
    "is the probability that some database in the space of databases exceeds epsilon. "
    "pi is not computed by this tool; it contracts to zero as the sample size grows.";

}  // namespace

nlohmann::json build_release_report(const SyntheticRelease& release, const RunConfig& config,
                                    std::size_t n_records, std::uint64_t input_hash) {
  nlohmann::json report;
  report["mechanism"] = to_string(release.mechanism);
  report["model"] = release.model_id;
  report["seed"] = release.seed;
  report["n_records"] = n_records;
  report["m_databases"] = release.lipschitz.m_databases;
  report["delta_local"] = release.lipschitz.delta_local;
  report["epsilon_per_db"] = release.lipschitz.epsilon_per_db;
  report["epsilon_total"] = release.lipschitz.epsilon_total;
  report["recommended_global_epsilon"] =
      recommend_global_epsilon(release.lipschitz, n_records, config.safety_factor);

  nlohmann::json weight_summary;
  {
    std::vector<double> alpha = release.weights.alpha;
    weight_summary["min"] = *std::min_element(alpha.begin(), alpha.end());
    weight_summary["max"] = *std::max_element(alpha.begin(), alpha.end());
    weight_summary["median"] = median(alpha);
    weight_summary["count_zeroed"] = release.weights.zeroed.size();
  }
  report["weight_summary"] = weight_summary;

  if (release.mechanism == MechanismKind::EmScalar) {
    report["em"] = {{"weight", release.em_weight},
                    {"clamped", release.em_weight_clamped},
                    {"calibration_iterations", release.em_iterations}};
  }
  nlohmann::json warnings = nlohmann::json::array();
  if (release.prior_predictive_fallback) {
    warnings.push_back("all weights are zero: release drawn from the prior predictive");
  }
  if (release.em_weight_clamped) {
    warnings.push_back("epsilon target meets or exceeds the unweighted expenditure; "
                       "scalar weight clamped to 1");
  }
  report["warnings"] = warnings;
  report["caveat"] = kPdpCaveat;

  const nlohmann::json resolved = config.resolved();
  report["config"] = resolved;
  report["config_hash"] = fnv1a64(resolved.dump());
  report["input_hash"] = input_hash;
  return report;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + path.string());
  out << value.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + " is not valid JSON: " + e.what());
  }
}

std::string format_report_text(const nlohmann::json& report) {
  std::ostringstream out;
  out << "mechanism:                  " << report.at("mechanism").get<std::string>() << '\n'
      << "model:                      " << report.at("model").get<std::string>() << '\n'
      << "records:                    " << report.at("n_records").get<std::size_t>() << '\n'
      << "databases released (m):     " << report.at("m_databases").get<std::size_t>() << '\n'
      << "delta (local Lipschitz):    " << report.at("delta_local").get<double>() << '\n'
      << "epsilon per database:       " << report.at("epsilon_per_db").get<double>() << '\n'
      << "epsilon total (x m):        " << report.at("epsilon_total").get<double>() << '\n'
      << "recommended global epsilon: "
      << report.at("recommended_global_epsilon").get<double>() << '\n';
  const auto& w = report.at("weight_summary");
  out << "alpha min/median/max:       " << w.at("min").get<double>() << " / "
      << w.at("median").get<double>() << " / " << w.at("max").get<double>() << '\n'
      << "weights zeroed:             " << w.at("count_zeroed").get<std::size_t>() << '\n';
  if (report.contains("em")) {
    out << "em scalar weight:           " << report.at("em").at("weight").get<double>()
        << '\n';
  }
  for (const auto& warning : report.at("warnings")) {
    out << "warning: " << warning.get<std::string>() << '\n';
  }
  out << "caveat: " << report.at("caveat").get<std::string>() << '\n';
  return out.str();
}

}  // namespace pseudodp
