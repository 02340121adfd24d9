#pragma once

#include <string>

#include "lidopt/run_config.hpp"

namespace lidopt {

/// Exit codes shared by all subcommands: 0 success, 2 config problem,
/// 3 I/O failure, 4 optimizer rejection.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitOptimizer = 4;

/// Casts every frame at the configured deployment and writes one cloud file
/// per frame plus manifest.txt.
int cmd_simulate(const std::string& config_path, const CliOverrides& overrides);

/// Writes vgop_report.csv (with a trailing summary line) and
/// baseline_metrics.csv for the configured deployment.
int cmd_evaluate(const std::string& config_path, const CliOverrides& overrides);

/// Runs the swarm search and writes history.csv and optimize_result.txt,
/// including the fixed 2.0 m / no-tilt baseline comparison.
int cmd_optimize(const std::string& config_path, const CliOverrides& overrides);

/// Summarizes the exports already present in a run directory into
/// report_summary.txt and stdout.
int cmd_report(const std::string& out_dir);

}  // namespace lidopt
