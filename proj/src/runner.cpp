#include "fluxsim/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

namespace fluxsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kCodeVersion = "fluxsim 1.0";

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir);
}

void guard_reduced_spec(const RunConfig& config) {
  long dim = static_cast<long>(config.hilbert.product_dim()) *
             config.hilbert.n_sidebands;
  if (!config.full_scale && dim > 4000)
    throw ConfigError(
        "floquet dimension " + std::to_string(dim) +
        " exceeds the reduced-spec guard; set full_scale=true to run it");
}

}  // namespace

int run_qnd_sweep(const std::string& config_path, const std::string& out_dir,
                  int n_threads) {
  RunConfig config;
  try {
    config = load_config(config_path);
    if (config.epsilon_grid.empty())
      throw ConfigError("sweep.epsilon_grid is empty");
    guard_reduced_spec(config);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfigError;
  }

  ensure_dir(out_dir);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<QndCurve> curves;
  try {
    curves = sweep_qnd_curves(config.device, config.tls, config.hilbert,
                              config.epsilon_grid, config.initial_states,
                              config.solver, config.omega_d_override,
                              n_threads);
  } catch (const std::exception& ex) {
    std::cerr << "sweep failed: " << ex.what() << "\n";
    return kExitPartialFailure;
  }

  RunManifest manifest;
  manifest.config_json = config_to_json(config);
  manifest.code_version = kCodeVersion;
  bool any_failed = false;
  for (const QndCurve& curve : curves) {
    std::string path = out_dir + "/qnd_" + curve.initial_state + ".csv";
    write_qnd_curve_csv(path, curve);
    manifest.outputs.push_back({path, sha256_file(path)});
    for (const QndPoint& p : curve.points)
      if (!p.error.empty()) {
        any_failed = true;
        std::cerr << "point epsilon=" << p.epsilon << " (" << curve.initial_state
                  << "): " << p.error << "\n";
      }
  }
  manifest.total_wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(out_dir + "/manifest.json", manifest);
  return any_failed ? kExitPartialFailure : kExitOk;
}

int run_branch_report(const std::string& config_path,
                      const std::string& out_dir, double epsilon,
                      int n_levels_tracked) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfigError;
  }
  ensure_dir(out_dir);
  try {
    std::vector<Branch> branches = compute_branches(
        config.device, config.tls, config.hilbert, epsilon,
        std::min(n_levels_tracked, config.hilbert.n_flux),
        config.solver.basis_size);
    std::string path = out_dir + "/branches.csv";
    write_branch_csv(path, branches, config.hilbert.n_flux);
    RunManifest manifest;
    manifest.config_json = config_to_json(config);
    manifest.code_version = kCodeVersion;
    manifest.outputs.push_back({path, sha256_file(path)});
    write_manifest(out_dir + "/manifest.json", manifest);
  } catch (const std::exception& ex) {
    std::cerr << "branch analysis failed: " << ex.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

int run_stats(const std::string& shots_path, const std::string& config_path,
              const std::string& out_dir) {
  RunConfig config;
  std::vector<ShotRecord> records;
  try {
    config = load_config(config_path);
    records = read_shots_csv(shots_path);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfigError;
  }
  ensure_dir(out_dir);
  try {
    std::vector<Shot> init_shots, final_shots;
    for (const ShotRecord& r : records) {
      init_shots.push_back(r.init);
      final_shots.push_back(r.fin);
    }
    GaussianFit fit_i = fit_readout_gaussians(init_shots, 2);
    GaussianFit fit_f = fit_readout_gaussians(final_shots, 2);

    auto snr_of = [](const GaussianFit& f) {
      double sep = f.centers[0].i - f.centers[1].i;
      return sep * sep / (f.sigma * f.sigma);
    };
    double p_err_i = assignment_error_probability(snr_of(fit_i));
    double p_err_f = assignment_error_probability(snr_of(fit_f));
    ErrorMatrix e_i = error_matrix_2state(p_err_i);
    ErrorMatrix e_f = error_matrix_2state(p_err_f);

    auto assign = [](const GaussianFit& f, const Shot& s) {
      double ct = std::cos(f.rotation), st = std::sin(f.rotation);
      double x = ct * s.i - st * s.q;
      double mid = (f.centers[0].i + f.centers[1].i) / 2;
      bool low_is_0 = f.centers[0].i < f.centers[1].i;
      return (x < mid) == low_is_0 ? 0 : 1;
    };
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(records.size());
    for (const ShotRecord& r : records)
      pairs.emplace_back(assign(fit_i, r.init), assign(fit_f, r.fin));

    int sample_size = std::min<int>(config.bootstrap_sample_size,
                                    static_cast<int>(pairs.size()));
    TransitionStats stats = bootstrap_probabilities(
        pairs, 2, config.bootstrap_samples, sample_size, e_i, e_f,
        static_cast<uint64_t>(config.bootstrap_seed));

    json report;
    report["n_shots"] = records.size();
    report["snr_init"] = snr_of(fit_i);
    report["snr_final"] = snr_of(fit_f);
    report["p_err_init"] = p_err_i;
    report["p_err_final"] = p_err_f;
    report["degenerate_init"] = fit_i.degenerate_flag;
    report["degenerate_final"] = fit_f.degenerate_flag;
    std::ofstream jf(out_dir + "/stats.json");
    jf << report.dump(2) << '\n';

    std::ofstream cf(out_dir + "/transition_probabilities.csv");
    cf << "initial,final,mean,sd\n";
    const char* names[2] = {"g", "e"};
    for (int i0 = 0; i0 < 2; ++i0)
      for (int f0 = 0; f0 < 2; ++f0)
        cf << names[i0] << ',' << names[f0] << ',' << stats.mean(f0, i0)
           << ',' << stats.sd(f0, i0) << '\n';
  } catch (const std::exception& ex) {
    std::cerr << "stats pipeline failed: " << ex.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

int run_calibrate(const std::string& stark_csv_path,
                  const std::string& config_path, const std::string& out_dir) {
  RunConfig config;
  StarkDataset data;
  try {
    config = load_config(config_path);
    data = read_stark_csv(stark_csv_path, config.device,
                          config.stark_delta_ghz);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfigError;
  }
  ensure_dir(out_dir);
  try {
    double chi = dispersive_shift(config.device, config.hilbert,
                                  config.solver.basis_size);
    double kerr_p = kerr_coefficient(config.device, config.hilbert, +1,
                                     config.solver.basis_size);
    double kerr_m = kerr_coefficient(config.device, config.hilbert, -1,
                                     config.solver.basis_size);
    AttenuationFit fit = fit_attenuation_scale(data, chi, config.hilbert,
                                               config.solver.basis_size);
    json report;
    report["alpha"] = fit.alpha;
    report["alpha_db"] = fit.alpha_db;
    report["residual_rms_ghz"] = fit.residual_rms;
    report["zero_slope_flag"] = fit.zero_slope_flag;
    report["chi_ghz"] = chi;
    report["kerr_plus_ghz"] = kerr_p;
    report["kerr_minus_ghz"] = kerr_m;
    std::ofstream jf(out_dir + "/calibration.json");
    jf << report.dump(2) << '\n';

    std::ofstream cf(out_dir + "/photon_calibration.csv");
    cf << "p_rf_watts,n_plus,n_minus\n";
    if (fit.alpha > 0)
      for (const StarkRecord& r : data.records) {
        double np = photons_from_power(r.p_rf_watts, fit.alpha, config.device,
                                       data.delta_ghz, chi, kerr_p, +1);
        double nm = photons_from_power(r.p_rf_watts, fit.alpha, config.device,
                                       data.delta_ghz, chi, kerr_m, -1);
        cf << r.p_rf_watts << ',' << np << ',' << nm << '\n';
      }
  } catch (const std::exception& ex) {
    std::cerr << "calibration failed: " << ex.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

}  // namespace fluxsim
