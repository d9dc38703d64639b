#pragma once

#include <filesystem>
#include <ostream>

#include "pseudodp/config.hpp"

namespace pseudodp {

/// Runs a release pipeline and writes synthetic_###.csv, report.json, and
/// weights.csv into out_dir.
void cmd_synthesize(const RunConfig& config, const std::filesystem::path& out_dir,
                    int workers);

/// Runs the (c, g) risk-utility sweep and writes sweep.csv plus violin.json.
void cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir, int workers);

/// Runs the contraction study and writes study.csv plus study_summary.json.
void cmd_contraction(const RunConfig& config, const std::filesystem::path& out_dir,
                     int workers);

/// Pretty-prints the report.json found in out_dir.
void cmd_report(const std::filesystem::path& out_dir, std::ostream& out);

/// Full CLI entry point; maps errors to exit codes (0 ok, 2 config, 3 data,
/// 4 numeric).
int run_cli(int argc, const char* const* argv);

}  // namespace pseudodp
