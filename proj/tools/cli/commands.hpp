#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace riemobs::cli {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInconclusive = 2, kExitConfig = 3 };

int exit_code_for(Verdict v);

/// Benchmark metric named by the recipe, or the benchmark default.
NamedMetric resolve_metric(const BenchmarkSpec& bench, MetricRecipe recipe);

int cmd_check(const JobConfig& cfg, std::ostream& out);
int cmd_simulate(const JobConfig& cfg, std::ostream& out);
int cmd_geodesic(const JobConfig& cfg, std::ostream& out);
int cmd_report(const std::string& dir, std::ostream& out);

/// Full command line without the program name, e.g. {"check", "--benchmark", "linear"}.
/// Library errors are caught and mapped to exit codes; messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riemobs::cli
