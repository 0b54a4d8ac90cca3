#pragma once

#include <string>

#include "fluxsim/io.hpp"

namespace fluxsim {

// Exit codes shared by the CLI: 0 success, 2 config error, 3 partial
// solver failure (some sweep points failed but the run completed).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPartialFailure = 3;

int run_qnd_sweep(const std::string& config_path, const std::string& out_dir,
                  int n_threads);

int run_branch_report(const std::string& config_path,
                      const std::string& out_dir, double epsilon = 0,
                      int n_levels_tracked = 6);

int run_stats(const std::string& shots_path, const std::string& config_path,
              const std::string& out_dir);

int run_calibrate(const std::string& stark_csv_path,
                  const std::string& config_path, const std::string& out_dir);

}  // namespace fluxsim
