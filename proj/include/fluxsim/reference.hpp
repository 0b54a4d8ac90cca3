#pragma once

#include <functional>
#include <vector>

#include "fluxsim/types.hpp"

namespace fluxsim {

// Direct time-domain Lindblad integration in the lab frame, without any
// Floquet or reduced-basis machinery. Serial, dense, meant for small
// systems: it is the reference implementation the fast path is tested
// and benchmarked against.

struct LindbladTrace {
  std::vector<double> times;           // ns
  std::vector<double> expectation;     // tr(obs rho) at each sample
  Matrix rho_final;
};

// rho' = -i 2pi [H(t), rho] + 2pi kappa D[c] rho, fixed-step RK4.
// h_of_t returns the Hamiltonian in GHz at time t (ns).
LindbladTrace integrate_lindblad_direct(
    const std::function<Matrix(double)>& h_of_t, const Matrix& collapse,
    double kappa_ghz, const Matrix& rho0, double t_end_ns, double dt_ns,
    const Matrix& observable, int n_samples = 50);

// Steady-state photon number of a driven damped cavity (no qubit),
// integrated directly with drive epsilon*cos(omega_d t) on -i(a - a^dag).
double driven_cavity_steady_n(double omega_r_ghz, double kappa_ghz,
                              double epsilon_ghz, double omega_d_ghz,
                              int n_fock, double t_end_factor = 10.0);

// Analytic steady photon number of the same cavity in rotating-wave
// approximation: (eps/2)^2 / ((kappa/2)^2 + (omega_r - omega_d)^2).
double driven_cavity_lorentzian(double omega_r_ghz, double kappa_ghz,
                                double epsilon_ghz, double omega_d_ghz);

}  // namespace fluxsim
