#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fluxsim/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fluxonium dispersive-readout leakage simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int n_threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threads", n_threads, "worker threads (0 = default)");
  };

  CLI::App* sweep = app.add_subcommand(
      "sweep", "steady-state transition-probability curves vs drive");
  add_common(sweep);

  CLI::App* branch =
      app.add_subcommand("branch", "static branch analysis report");
  add_common(branch);
  double epsilon = 0;
  int n_tracked = 6;
  branch->add_option("--epsilon", epsilon, "drive strength (GHz)");
  branch->add_option("--levels", n_tracked, "fluxonium branches tracked");

  CLI::App* stats =
      app.add_subcommand("stats", "IQ shot statistics pipeline");
  add_common(stats);
  std::string shots_path;
  stats->add_option("--shots", shots_path, "shots CSV")->required();

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "ac-Stark photon calibration");
  add_common(calibrate);
  std::string stark_path;
  calibrate->add_option("--stark", stark_path, "stark dataset CSV")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (sweep->parsed())
    return fluxsim::run_qnd_sweep(config_path, out_dir, n_threads);
  if (branch->parsed())
    return fluxsim::run_branch_report(config_path, out_dir, epsilon,
                                      n_tracked);
  if (stats->parsed())
    return fluxsim::run_stats(shots_path, config_path, out_dir);
  if (calibrate->parsed())
    return fluxsim::run_calibrate(stark_path, config_path, out_dir);
  return fluxsim::kExitConfigError;
}
