#pragma once

#include "fluxsim/types.hpp"

namespace fluxsim {

struct FluxoniumParams {
  double e_j = 0;      // Josephson energy / 2pi, GHz
  double e_c = 0;      // charging energy / 2pi, GHz
  double e_l = 0;      // inductive energy / 2pi, GHz
  double phi_ext = 0;  // external flux in units of Phi_0

  void validate() const;
};

struct FluxoniumEigenbasis {
  RealVector energies;     // lowest n_levels_kept, ascending, GHz
  Matrix states;           // columns, in the construction basis
  int n_levels_kept = 0;
  Matrix charge_elements;  // <i|n|j> in the eigenbasis
};

inline constexpr int kDefaultBasisSize = 60;

// Charge and phase operators in the harmonic construction basis.
Matrix charge_operator(const FluxoniumParams& params, int basis_size);
Matrix phase_operator(const FluxoniumParams& params, int basis_size);

// 4 E_C n^2 + (E_L/2) phi^2 - E_J cos(phi - 2 pi phi_ext) in the
// harmonic-oscillator basis of the E_L-E_C oscillator.
Matrix build_fluxonium_hamiltonian(const FluxoniumParams& params,
                                   int basis_size = kDefaultBasisSize);

FluxoniumEigenbasis diagonalize_fluxonium(const Matrix& h, int n_levels);

FluxoniumEigenbasis solve_fluxonium(const FluxoniumParams& params,
                                    int n_levels,
                                    int basis_size = kDefaultBasisSize);

// E1 - E0 of the converged bare spectrum, GHz.
double qubit_frequency(const FluxoniumParams& params,
                       int basis_size = kDefaultBasisSize);

}  // namespace fluxsim
