#pragma once

#include <optional>

#include "fluxsim/fluxonium.hpp"
#include "fluxsim/types.hpp"

namespace fluxsim {

struct DeviceParams {
  FluxoniumParams fluxonium;
  double g = 0;        // fluxonium-resonator coupling / 2pi, GHz
  double omega_r = 0;  // bare resonator frequency / 2pi, GHz
  double kappa = 0;    // resonator linewidth / 2pi, GHz

  void validate() const;
};

struct TlsParams {
  double delta_tls = 0;    // TLS transition frequency / 2pi, GHz
  double g_tls = 0;        // TLS-fluxonium coupling / 2pi, GHz
  double temperature = 0;  // kelvin
  int photon_order = 0;    // 0 = direct resonance, m > 0 = 2m-photon variant

  void validate() const;
};

struct DriveParams {
  double epsilon = 0;  // drive strength / 2pi, GHz
  double omega_d = 0;  // drive frequency / 2pi, GHz

  void validate() const;
};

struct HilbertSpec {
  int n_flux = 10;
  int n_fock = 65;
  bool tls_present = false;
  int n_sidebands = 13;

  int n_tls() const { return tls_present ? 2 : 1; }
  int product_dim() const { return n_flux * n_fock * n_tls(); }
  void validate() const;
};

// Hard cap on the static product dimension, guarding accidental huge builds.
inline constexpr int kProductDimensionCap = 200000;

// Operators on the fluxonium-eigenbasis x Fock (x TLS) product space.
// Index layout: s = (q * n_fock + n) * n_tls + t.
struct ProductOperators {
  Matrix identity_flux;
  Matrix a;            // resonator lowering, on the full product space
  Matrix num;          // a^dag a on the full product space
  Matrix n_flux_op;    // fluxonium charge operator lifted to the product space
};

Matrix lift_flux(const Matrix& op, const HilbertSpec& spec);
Matrix lift_fock(const Matrix& op, const HilbertSpec& spec);
Matrix lift_tls(const Matrix& op, const HilbertSpec& spec);
int product_index(int q, int n, int t, const HilbertSpec& spec);

Matrix build_static_hamiltonian(const DeviceParams& dev,
                                const HilbertSpec& spec,
                                int basis_size = kDefaultBasisSize);

Matrix extend_with_tls(const Matrix& h, const TlsParams& tls,
                       const DeviceParams& dev, const HilbertSpec& spec,
                       int basis_size = kDefaultBasisSize);

// Static + TLS (when spec.tls_present) in one call.
Matrix build_system_hamiltonian(const DeviceParams& dev,
                                const std::optional<TlsParams>& tls,
                                const HilbertSpec& spec,
                                int basis_size = kDefaultBasisSize);

// Time sample of the lab-frame driven Hamiltonian, for cross-checks only.
Matrix build_driven_hamiltonian(const DeviceParams& dev,
                                const DriveParams& drive,
                                const HilbertSpec& spec, double t_ns,
                                int basis_size = kDefaultBasisSize);

// Dressed levels labeled by maximum overlap with bare product states.
struct DressedSystem {
  RealVector energies;
  Matrix states;
  HilbertSpec spec;
  std::vector<int> label_of;  // eigenindex -> bare product index (or -1)

  // Energy of the dressed state adiabatically connected to |q, n, t>.
  double energy(int q, int n, int t = 0) const;
  int eigen_index(int q, int n, int t = 0) const;
};

DressedSystem dress(const Matrix& h, const HilbertSpec& spec);

// chi = [ (E(e,1)-E(e,0)) - (E(g,1)-E(g,0)) ] / 2, GHz.
double dispersive_shift(const DeviceParams& dev, const HilbertSpec& spec,
                        int basis_size = kDefaultBasisSize);

// omega_q(n_bar) = omega_q(0) + 2 chi n_bar, GHz.
double stark_shifted_qubit_frequency(const DeviceParams& dev, double n_bar,
                                     const HilbertSpec& spec,
                                     int basis_size = kDefaultBasisSize);

// Predicted resonance shift dn* = -d_omega_ge / (2 chi) for a qubit
// frequency change d_omega_ge (GHz).
double resonance_shift_prediction(double delta_omega_ge_ghz, double chi_ghz);

// Thermal TLS excited-state occupation 1 / (1 + exp(beta (Delta0 + k Omega))).
double tls_thermal_population(const TlsParams& tls, double omega_d_ghz);

}  // namespace fluxsim
