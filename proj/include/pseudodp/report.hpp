#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pseudodp/config.hpp"
#include "pseudodp/mechanisms.hpp"

namespace pseudodp {

/// report.json payload: privacy accounting, weight summary, the pDP caveat,
/// the full resolved config, and provenance hashes. All numbers serialize
/// with round-trip precision.
nlohmann::json build_release_report(const SyntheticRelease& release, const RunConfig& config,
                                    std::size_t n_records, std::uint64_t input_hash);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

nlohmann::json read_json(const std::filesystem::path& path);

/// Human-readable rendering of a release report for the `report` command.
std::string format_report_text(const nlohmann::json& report);

}  // namespace pseudodp
