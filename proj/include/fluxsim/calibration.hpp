#pragma once

#include <vector>

#include "fluxsim/composite.hpp"
#include "fluxsim/types.hpp"

namespace fluxsim {

struct StarkRecord {
  double p_rf_watts = 0;
  double f_q_ghz = 0;
};

struct StarkDataset {
  std::vector<StarkRecord> records;
  DeviceParams device;
  double delta_ghz = 0;  // drive detuning omega_rf - omega_r
};

struct AttenuationFit {
  double alpha = 0;
  double alpha_db = 0;
  double residual_rms = 0;  // GHz
  bool zero_slope_flag = false;
};

// Kerr coefficient from dressed-level second differences for qubit state
// q (+1 -> e, -1 -> g): K = [E(q,2)-E(q,1)] - [E(q,1)-E(q,0)].
double kerr_coefficient(const DeviceParams& dev, const HilbertSpec& spec,
                        int qubit_state_sign,
                        int basis_size = kDefaultBasisSize);

// Photon number from applied power, solved self-consistently in the Kerr
// correction: n = alpha (kappa/2) P / (hbar w_rf [(kappa/2)^2 + (delta +
// sign*chi + K n)^2]), all frequencies GHz, P in watts.
double photons_from_power(double p_rf_watts, double alpha,
                          const DeviceParams& dev, double delta_ghz,
                          double chi_ghz, double kerr_ghz, int sign = +1);

// Least-squares slope of f_q vs P_rf against the model
// w_q(P) = w_q(0) + 2 chi alpha (C_+ + C_-) P.
AttenuationFit fit_attenuation_scale(const StarkDataset& data, double chi_ghz,
                                     const HilbertSpec& spec,
                                     int basis_size = kDefaultBasisSize);

// The linear response constants C_± = (kappa/2) / (hbar w_rf [(kappa/2)^2 +
// (delta ± chi)^2]) used by the attenuation fit (photons per watt).
double stark_response_constant(const DeviceParams& dev, double delta_ghz,
                               double chi_ghz, int sign);

}  // namespace fluxsim
