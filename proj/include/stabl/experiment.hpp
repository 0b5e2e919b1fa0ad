#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stabl {

struct EnvironmentSpec {
  std::string kind;  // piecewise_expert | csv_loss | quadratic_bco
  // piecewise_expert
  int arms = 0;
  std::vector<long> change_points;
  double boost = 0.5;
  // csv_loss
  std::string csv_path;
  // quadratic_bco
  int dim = 0;
  Eigen::VectorXd center;
  double inner_radius = 1.0;
  double outer_radius = 1.0;
  double lipschitz = 1.0;
  double loss_bound = 1.0;
};

struct AlgorithmSpec {
  std::string kind;  // stabl | stabl_naive | stabl_single_scale | exp3 |
                     // bco_three_query | bco_two_query
  std::string label; // output directory name; defaults to kind
  std::optional<std::vector<long>> scales;
};

struct ExperimentConfig {
  std::string name;
  EnvironmentSpec environment;
  long horizon = 0;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::uint64_t> seeds;
  long moving_average_window = 50;
  std::string output_dir = "out";
  std::string regret_mode = "off";  // exact | geometric | off
};

struct ValidationResult {
  std::optional<ExperimentConfig> config;  // set only when errors is empty
  std::vector<std::string> errors;         // all failures, not first-only
};

// Full structural validation of a config file; collects every error it can
// find rather than stopping at the first.
ValidationResult validate_config(const std::string& path);

// Runs every (algorithm, seed) pair, optionally across a worker pool, and
// writes per-run CSVs, per-algorithm moving-average curves, and a summary
// JSON under `<output_dir>/<name>/`. Returns a process exit status; failures
// also leave a machine-readable `error.json` in the output directory.
// Outputs are bit-identical for any worker count.
int run_experiment(const ExperimentConfig& config, int workers = 1);

}  // namespace stabl
