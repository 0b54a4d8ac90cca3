#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluxsim/branch.hpp"
#include "fluxsim/calibration.hpp"
#include "fluxsim/composite.hpp"
#include "fluxsim/floquet.hpp"
#include "fluxsim/readout_stats.hpp"

namespace fluxsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Human-editable JSON config with nested tables. Frequencies in GHz,
// powers in watts, flux in Phi_0.
struct RunConfig {
  DeviceParams device;
  std::optional<TlsParams> tls;
  HilbertSpec hilbert;
  SolverOptions solver;
  std::vector<double> epsilon_grid;
  std::vector<std::string> initial_states = {"g", "e"};
  double omega_d_override = 0;  // 0: dressed resonator frequency per state
  double stark_delta_ghz = 0;
  double bootstrap_seed = 12345;
  int bootstrap_samples = 1000;
  int bootstrap_sample_size = 20000;
  bool full_scale = false;  // lifts the reduced-spec guard rails
  int schema_version = 1;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& config);

void write_qnd_curve_csv(const std::string& path, const QndCurve& curve);
QndCurve read_qnd_curve_csv(const std::string& path);

void write_branch_csv(const std::string& path,
                      const std::vector<Branch>& branches, int n_flux);

struct ShotRecord {
  long rep_index = 0;
  Shot init;
  Shot fin;
};
std::vector<ShotRecord> read_shots_csv(const std::string& path);
void write_shots_csv(const std::string& path,
                     const std::vector<ShotRecord>& records);

StarkDataset read_stark_csv(const std::string& path, const DeviceParams& dev,
                            double delta_ghz);

struct ManifestEntry {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string config_json;
  std::string code_version;
  std::vector<ManifestEntry> outputs;
  std::vector<double> point_wall_seconds;
  uint64_t rng_seed = 0;
  double total_wall_seconds = 0;
};

void write_manifest(const std::string& path, const RunManifest& manifest);
std::string sha256_file(const std::string& path);

}  // namespace fluxsim
