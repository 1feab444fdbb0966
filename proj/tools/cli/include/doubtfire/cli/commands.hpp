#pragma once

#include <filesystem>
#include <iosfwd>

#include "doubtfire/cli/config_file.hpp"

namespace doubtfire::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kFatal = 3, kIo = 4 };

/// Where a command writes files and its human-readable summary.
struct Output {
  std::filesystem::path dir = "out";
  std::ostream* summary = nullptr;
};

/// One simulation: metrics.json, trace.log, field_A.csv, field_B.csv and
/// injections.csv. Returns kFatal if a Fatal verdict stopped the run.
int cmd_run(const Config& config, const Output& out);

/// Sensitivity table: campaign.csv (per-run rows, footer aggregates) and
/// injections.csv.
int cmd_sensitivity(const Config& config, const Output& out);

/// Trade-off sweep: campaign.csv with one row per configuration and runs.csv
/// with the underlying per-run rows.
int cmd_tradeoff(const Config& config, const Output& out);

/// Fault-free single-team run: field_baseline.csv and metrics.json.
int cmd_baseline(const Config& config, const Output& out);

}  // namespace doubtfire::cli
