#pragma once

#include <string>
#include <vector>

#include "frlab/verify.hpp"
#include "frlab/whitenoise.hpp"

namespace frlab {

// Exit-code contract: 0 all hard assertions pass, 1 soft failure (a report's
// pass flag is false), 2 invalid configuration, 3 Picard divergence.
struct RunResult {
  int exit_code = 0;
  std::string message;
};

// Known experiment names, one per line in declaration order.
std::vector<std::string> experiment_names();

// Execute the experiment described by the JSON config file; artifacts (CSV,
// JSON reports, manifest.json) land in the configured output_dir.
RunResult run_experiment_file(const std::string& config_path);

// Re-run the experiment with one axis scaled by each factor, aggregating the
// tracked ratio/error per level into a sweep report.
RunResult sweep_experiment_file(const std::string& config_path,
                                const std::string& axis,
                                const std::vector<double>& factors);

// Least-squares slope of log(y) against log(x); used for convergence fits.
double fitted_log_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

}  // namespace frlab
