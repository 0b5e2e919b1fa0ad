#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stabl/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Strongly adaptive bandit experiment runner"};
  app.require_subcommand(1);

  std::string run_path;
  std::string validate_path;
  std::string out_dir;
  int workers = 1;
  bool validate_only = false;

  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", run_path, "Path to the experiment config")->required();
  run->add_option("--out-dir", out_dir, "Override the config's output directory");
  run->add_option("--workers", workers, "Worker threads for independent runs")
      ->envname("STABL_WORKERS")
      ->check(CLI::PositiveNumber);
  run->add_flag("--validate-only", validate_only, "Validate the config and exit");

  CLI::App* validate = app.add_subcommand("validate", "Validate a JSON config");
  validate->add_option("config", validate_path, "Path to the experiment config")->required();

  CLI11_PARSE(app, argc, argv);

  const std::string& path = run->parsed() ? run_path : validate_path;
  stabl::ValidationResult result = stabl::validate_config(path);
  if (!result.config.has_value()) {
    std::cerr << "invalid config: " << path << '\n';
    for (const std::string& error : result.errors) std::cerr << "  - " << error << '\n';
    return 1;
  }

  stabl::ExperimentConfig config = std::move(*result.config);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (!run->parsed() || validate_only) {
    std::cout << "config ok: " << config.name << " (" << config.algorithms.size()
              << " algorithms, " << config.seeds.size() << " seeds, T=" << config.horizon
              << ")\n";
    return 0;
  }

  const int status = stabl::run_experiment(config, workers);
  if (status == 0) {
    std::cout << "wrote "
              << (std::filesystem::path(config.output_dir) / config.name).string() << '\n';
  } else {
    std::cerr << "experiment failed; see error.json under the output directory\n";
  }
  return status;
}
