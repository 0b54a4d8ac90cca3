#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluxsim/composite.hpp"
#include "fluxsim/linalg.hpp"
#include "fluxsim/types.hpp"

namespace fluxsim {

struct FloquetLattice {
  int n_sidebands = 1;
  double omega_d = 0;  // GHz

  // Right-translation b^dag on the sideband index (nilpotent at the edge).
  Matrix translation() const;
};

struct QuasiEigenbasis {
  double center_energy = 0;
  RealVector quasi_energies;
  Matrix states;  // columns, on the full Floquet space
  int k_kept = 0;
};

struct SolverOptions {
  double rtol = 1e-7;
  double atol = 1e-9;
  // Jump-operator matrix elements between quasi-levels split by this
  // frequency or more are treated secularly (GHz).
  double secular_cutoff_ghz = 0.03;
  int k_kept = 200;
  double capture_min = 0.999;
  int max_k_doublings = 3;
  double duration_factor = 10.0;  // evolution window in units of 1/kappa
  double fixed_point_rtol = 1e-7;
  int basis_size = kDefaultBasisSize;
  // Displacement frame: true = classical response at the dressed resonator
  // frequency of the initial qubit state, false = at the bare frequency.
  bool dressed_frame = true;
};

// Driven system lifted onto the sideband lattice, in the frame displaced
// by the classical resonator response alpha(t). The drive enters as a
// periodic fluxonium term g*n*phi_alpha(t); the residual resonator mode d
// carries quantum fluctuations and the kappa dissipator.
struct FloquetModel {
  DeviceParams dev;
  std::optional<TlsParams> tls;
  HilbertSpec spec;
  DriveParams drive;         // omega_d resolved to the actual drive frequency
  int initial_level = 0;     // qubit state conditioning the frame
  Complex alpha_plus{0, 0};  // e^{-i Omega t} response coefficient
  Complex alpha_minus{0, 0};
  double omega_eff = 0;      // cavity frequency used for alpha, GHz
  Matrix h0;                 // static product Hamiltonian, D x D
  Matrix d_op;               // displaced resonator lowering operator, D x D
  Matrix f;                  // Floquet Hamiltonian, (D*n_sidebands)^2

  int product_dim() const { return static_cast<int>(h0.rows()); }
  int floquet_dim() const { return static_cast<int>(f.rows()); }
  int sideband_offset() const { return spec.n_sidebands / 2; }

  // Initial pure state |level, 0_fock, 0_tls> on the central sideband.
  Vector initial_state(int level) const;
};

FloquetModel build_floquet_model(const DeviceParams& dev,
                                 const DriveParams& drive,
                                 const std::optional<TlsParams>& tls,
                                 const HilbertSpec& spec,
                                 int initial_level = 0,
                                 const SolverOptions& opts = {});

// The bare lifted operator view of the model (block tridiagonal).
inline const Matrix& build_floquet_hamiltonian(const FloquetModel& m) {
  return m.f;
}

// Abstract Lindbladian on the Floquet space: K rho = -i 2pi [F, rho]
// + 2pi kappa D[jump]. Application is matrix-free against dense rho.
struct Lindbladian {
  const Matrix* f = nullptr;
  Matrix jump;
  double kappa_ghz = 0;

  Matrix apply(const Matrix& rho) const;
};

Lindbladian build_lindbladian(const Matrix& f, double kappa_ghz,
                              const FloquetLattice& lattice,
                              const Matrix& jump_product);

QuasiEigenbasis select_quasi_eigenbasis(const Matrix& f, const Vector& psi0,
                                        int k_kept);

struct EvolveResult {
  Matrix rho_reduced;       // in the quasi-eigenbasis, lab picture at t_end
  double n_bar = 0;
  RealVector populations;   // per fluxonium level, length n_flux
  double p_other = 0;       // levels >= 5
  bool converged = false;
  double residual = 0;      // ||K rho||_F / ||rho||_F at t_end
  double edge_population = 0;
  double capture = 0;
  int k_used = 0;
  double wall_seconds = 0;
};

EvolveResult evolve_to_fixed_point(const FloquetModel& model,
                                   const QuasiEigenbasis& basis,
                                   const Vector& psi0,
                                   const SolverOptions& opts);

// One sweep point: basis selection with automatic k doubling, evolution,
// observables.
EvolveResult run_steady_state(const FloquetModel& model,
                              const SolverOptions& opts);

struct QndPoint {
  double epsilon = 0;
  double n_bar = 0;
  RealVector probabilities;  // per fluxonium level
  double p_other = 0;
  bool converged = false;
  std::string error;  // nonempty when the point failed
};

struct QndCurve {
  std::string initial_state;
  std::vector<QndPoint> points;
};

std::vector<QndCurve> sweep_qnd_curves(
    const DeviceParams& dev, const std::optional<TlsParams>& tls,
    const HilbertSpec& spec, const std::vector<double>& epsilon_grid,
    const std::vector<std::string>& initial_states,
    const SolverOptions& opts = {}, double omega_d_override = 0,
    int n_threads = 0);

}  // namespace fluxsim
