#include "fluxsim/reference.hpp"

#include <cmath>

namespace fluxsim {

namespace {

Matrix lindblad_rhs(const Matrix& h, const Matrix& c, double kappa_ang,
                    const Matrix& rho) {
  Matrix comm = h * rho - rho * h;
  Matrix crc = c * rho * c.adjoint();
  Matrix cdc = c.adjoint() * c;
  return Complex(0, -kTwoPi) * comm +
         kappa_ang * (crc - 0.5 * (cdc * rho + rho * cdc));
}

}  // namespace

LindbladTrace integrate_lindblad_direct(
    const std::function<Matrix(double)>& h_of_t, const Matrix& collapse,
    double kappa_ghz, const Matrix& rho0, double t_end_ns, double dt_ns,
    const Matrix& observable, int n_samples) {
  if (dt_ns <= 0 || t_end_ns <= 0) throw DomainError("bad integration window");
  const double kappa_ang = kGHzToAngularPerNs * kappa_ghz;
  long n_steps = static_cast<long>(std::ceil(t_end_ns / dt_ns));
  double dt = t_end_ns / double(n_steps);
  long sample_every = std::max(1L, n_steps / std::max(1, n_samples));

  LindbladTrace out;
  Matrix rho = rho0;
  out.times.push_back(0.0);
  out.expectation.push_back(std::real((observable * rho).trace()));
  for (long s = 0; s < n_steps; ++s) {
    double t = s * dt;
    Matrix k1 = lindblad_rhs(h_of_t(t), collapse, kappa_ang, rho);
    Matrix k2 = lindblad_rhs(h_of_t(t + dt / 2), collapse, kappa_ang,
                             (rho + (dt / 2) * k1).eval());
    Matrix k3 = lindblad_rhs(h_of_t(t + dt / 2), collapse, kappa_ang,
                             (rho + (dt / 2) * k2).eval());
    Matrix k4 = lindblad_rhs(h_of_t(t + dt), collapse, kappa_ang,
                             (rho + dt * k3).eval());
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((s + 1) % sample_every == 0 || s + 1 == n_steps) {
      out.times.push_back((s + 1) * dt);
      out.expectation.push_back(std::real((observable * rho).trace()));
    }
  }
  out.rho_final = rho;
  return out;
}

double driven_cavity_steady_n(double omega_r_ghz, double kappa_ghz,
                              double epsilon_ghz, double omega_d_ghz,
                              int n_fock, double t_end_factor) {
  if (n_fock < 4) throw DomainError("n_fock too small");
  Matrix a = Matrix::Zero(n_fock, n_fock);
  for (int i = 1; i < n_fock; ++i) a(i - 1, i) = std::sqrt(double(i));
  Matrix num = a.adjoint() * a;

  // Rotating frame at the drive. The counter-rotating part of the drive is
  // dropped; its weight here is O((epsilon/2 omega_d)^2), far below the
  // tolerances this reference is used at.
  double delta = omega_r_ghz - omega_d_ghz;
  Matrix h_static =
      delta * num + (epsilon_ghz / 2.0) * Complex(0, -1) * (a - a.adjoint());
  auto h_of_t = [&](double) -> Matrix { return h_static; };

  double scale = std::max({std::abs(delta), kappa_ghz, epsilon_ghz});
  double dt = 0.002 / scale;
  double t_end = t_end_factor / kappa_ghz;
  Matrix rho0 = Matrix::Zero(n_fock, n_fock);
  rho0(0, 0) = 1.0;
  LindbladTrace tr = integrate_lindblad_direct(h_of_t, a, kappa_ghz, rho0,
                                               t_end, dt, num, 8);
  return tr.expectation.back();
}

double driven_cavity_lorentzian(double omega_r_ghz, double kappa_ghz,
                                double epsilon_ghz, double omega_d_ghz) {
  double delta = omega_r_ghz - omega_d_ghz;
  double half_eps = epsilon_ghz / 2.0;
  double half_kappa = kappa_ghz / 2.0;
  return half_eps * half_eps / (half_kappa * half_kappa + delta * delta);
}

}  // namespace fluxsim
