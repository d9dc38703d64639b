#include "pseudodp/cli_commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "pseudodp/csv.hpp"
#include "pseudodp/errors.hpp"
#include "pseudodp/report.hpp"

namespace pseudodp {

namespace {

int log_level() {
  // 0 = error, 1 = info, 2 = debug
  const char* env = std::getenv("PSEUDODP_LOG");
  if (!env) return 1;
  const std::string value = env;
  if (value == "error") return 0;
  if (value == "debug") return 2;
  return 1;
}

void log_info(const std::string& message) {
  if (log_level() >= 1) std::cerr << "[pseudodp] " << message << '\n';
}

std::string number_field(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void ensure_out_dir(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory: " + out_dir.string());
}

std::string synthetic_name(std::size_t index, std::size_t total) {
  int width = 3;
  for (std::size_t t = total; t > 999; t /= 10) ++width;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "synthetic_%0*zu.csv", width, index + 1);
  return buf;
}

void write_weights_csv(const std::filesystem::path& path, const SyntheticRelease& release) {
  CsvTable table;
  table.header = {"record_id", "f", "f_tilde", "alpha"};
  const auto& risk = release.risk;
  for (std::size_t i = 0; i < release.weights.size(); ++i) {
    std::vector<std::string> row(4);
    row[0] = std::to_string(i);
    const bool finite = std::isfinite(risk.max_abs_loglik[i]);
    row[1] = finite ? number_field(risk.max_abs_loglik[i]) : "inf";
    row[2] = finite ? number_field(risk.scaled_risk[i]) : "";
    row[3] = number_field(release.weights.alpha[i]);
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

std::unique_ptr<ModelBackend> make_backend(const RunConfig& config) {
  if (config.model == "poisson") {
    return std::make_unique<PoissonBackend>(config.poisson_prior);
  }
  return std::make_unique<MixtureBackend>(config.mixture_options);
}

}  // namespace

void cmd_synthesize(const RunConfig& config, const std::filesystem::path& out_dir,
                    int workers) {
  const CsvTable table = read_csv(config.input);
  const EncodedDataset encoded = encode_dataset(table, config.response);
  const std::uint64_t input_hash = hash_file(config.input);
  auto backend = make_backend(config);
  PipelineConfig pipeline = config.pipeline(workers);

  log_info("synthesize: " + config.model + " / " + to_string(config.mechanism) + ", n=" +
           std::to_string(encoded.data.size()));

  SyntheticRelease release;
  switch (config.mechanism) {
    case MechanismKind::Unweighted:
      release = run_unweighted(encoded.data, *backend, pipeline);
      break;
    case MechanismKind::AlphaWeighted:
      release = run_alpha_weighted(encoded.data, *backend, pipeline);
      break;
    case MechanismKind::EmScalar:
      release = run_em_scalar(encoded.data, *backend, pipeline);
      break;
  }

  ensure_out_dir(out_dir);
  for (std::size_t db = 0; db < release.databases.size(); ++db) {
    const CsvTable synthetic = with_response(table, config.response, release.databases[db]);
    write_csv(out_dir / synthetic_name(db, release.databases.size()), synthetic);
  }
  write_weights_csv(out_dir / "weights.csv", release);
  write_json(out_dir / "report.json",
             build_release_report(release, config, encoded.data.size(), input_hash));
  log_info("synthesize: wrote " + std::to_string(release.databases.size()) +
           " databases, delta=" + number_field(release.lipschitz.delta_local));
}

void cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir, int workers) {
  const CsvTable table = read_csv(config.input);
  const EncodedDataset encoded = encode_dataset(table, config.response);
  auto backend = make_backend(config);
  PipelineConfig pipeline = config.pipeline(workers);

  log_info("sweep: " + std::to_string(config.grid.size()) + " cells, n=" +
           std::to_string(encoded.data.size()));
  SweepResult sweep =
      risk_utility_sweep(encoded.data, *backend, config.grid, pipeline, config.stats);
  if (sweep.duplicates_dropped > 0) {
    log_info("sweep: dropped " + std::to_string(sweep.duplicates_dropped) +
             " duplicate grid cells");
  }

  ensure_out_dir(out_dir);
  CsvTable out;
  out.header = {"c", "g", "delta", "epsilon_total", "stat", "abs_error"};
  nlohmann::json violin = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& row : sweep.rows) {
    if (row.failed) {
      failures.push_back({{"c", row.c}, {"g", row.g}, {"error", row.error}});
      continue;
    }
    for (const auto& stat : row.stats) {
      out.rows.push_back({number_field(row.c), number_field(row.g),
                          number_field(row.delta_local), number_field(row.epsilon_total),
                          stat.stat, number_field(stat.abs_error)});
      violin.push_back({{"mechanism", "alpha_weighted"},
                        {"c", row.c},
                        {"g", row.g},
                        {"stat", stat.stat},
                        {"real_value", stat.real_value},
                        {"synthetic_value", stat.synthetic_value},
                        {"values", stat.barycenter_distribution}});
    }
  }
  write_csv(out_dir / "sweep.csv", out);
  nlohmann::json violin_doc;
  violin_doc["distributions"] = violin;
  violin_doc["failures"] = failures;
  violin_doc["duplicates_dropped"] = sweep.duplicates_dropped;
  violin_doc["config"] = config.resolved();
  write_json(out_dir / "violin.json", violin_doc);
}

void cmd_contraction(const RunConfig& config, const std::filesystem::path& out_dir,
                     int workers) {
  StudyConfig study = config.study;
  study.workers = workers;
  log_info("contraction study: " + std::to_string(study.ns.size()) + " sizes x " +
           std::to_string(study.replicates) + " replicates");
  const StudyResult result = run_study(study);

  ensure_out_dir(out_dir);
  CsvTable out;
  out.header = {"n", "mechanism", "replicate", "delta", "mu_mean"};
  for (const auto& cell : result.cells) {
    for (std::size_t rep = 0; rep < cell.deltas.size(); ++rep) {
      out.rows.push_back({std::to_string(cell.n), to_string(cell.mechanism),
                          std::to_string(rep), number_field(cell.deltas[rep]),
                          number_field(cell.mu_means[rep])});
    }
  }
  write_csv(out_dir / "study.csv", out);

  nlohmann::json summary;
  summary["failed_replicates"] = result.failed_replicates;
  summary["config"] = config.resolved();
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    cells.push_back({{"n", cell.n},
                     {"mechanism", to_string(cell.mechanism)},
                     {"delta", {{"min", cell.delta_summary.min},
                                {"max", cell.delta_summary.max},
                                {"median", cell.delta_summary.median},
                                {"spread", cell.delta_summary.spread}}},
                     {"mu_mean", {{"min", cell.mu_summary.min},
                                  {"max", cell.mu_summary.max},
                                  {"median", cell.mu_summary.median},
                                  {"spread", cell.mu_summary.spread}}}});
  }
  summary["cells"] = cells;
  write_json(out_dir / "study_summary.json", summary);
}

void cmd_report(const std::filesystem::path& out_dir, std::ostream& out) {
  const auto path = std::filesystem::is_directory(out_dir) ? out_dir / "report.json" : out_dir;
  out << format_report_text(read_json(path));
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"pseudo posterior synthetic data release toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int workers = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) {
      sub->add_option("--config", config_path, "JSON config file")->required();
    }
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker threads (default: all cores)");
  };

  CLI::App* synthesize = app.add_subcommand("synthesize", "generate a synthetic release");
  add_common(synthesize, true);
  CLI::App* sweep = app.add_subcommand("sweep", "risk-utility sweep over (c, g) cells");
  add_common(sweep, true);
  CLI::App* contraction =
      app.add_subcommand("contraction", "Monte Carlo Lipschitz contraction study");
  add_common(contraction, true);
  CLI::App* report = app.add_subcommand("report", "print a release report");
  add_common(report, false);

  try {
    app.parse(argc, argv);
    if (synthesize->parsed()) {
      cmd_synthesize(load_run_config(config_path, Command::Synthesize), out_dir, workers);
    } else if (sweep->parsed()) {
      cmd_sweep(load_run_config(config_path, Command::Sweep), out_dir, workers);
    } else if (contraction->parsed()) {
      cmd_contraction(load_run_config(config_path, Command::Contraction), out_dir, workers);
    } else if (report->parsed()) {
      cmd_report(out_dir, std::cout);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pseudodp
