#include "fluxsim/fluxonium.hpp"

#include <cmath>

#include "fluxsim/linalg.hpp"

namespace fluxsim {

void FluxoniumParams::validate() const {
  if (!(e_j > 0) || !(e_c > 0) || !(e_l > 0))
    throw DomainError("fluxonium energies must be positive");
  if (!std::isfinite(phi_ext)) throw DomainError("phi_ext must be finite");
}

namespace {

Matrix ladder(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) a(i - 1, i) = std::sqrt(double(i));
  return a;
}

}  // namespace

Matrix phase_operator(const FluxoniumParams& params, int basis_size) {
  double phi_zpf = std::pow(2.0 * params.e_c / params.e_l, 0.25);
  Matrix a = ladder(basis_size);
  return phi_zpf * (a + a.adjoint());
}

Matrix charge_operator(const FluxoniumParams& params, int basis_size) {
  double n_zpf = std::pow(params.e_l / (32.0 * params.e_c), 0.25);
  Matrix a = ladder(basis_size);
  return Complex(0, 1) * n_zpf * (a.adjoint() - a);
}

Matrix build_fluxonium_hamiltonian(const FluxoniumParams& params,
                                   int basis_size) {
  params.validate();
  if (basis_size < 20) throw DomainError("basis_size must be >= 20");
  Matrix phi = phase_operator(params, basis_size);
  Matrix n = charge_operator(params, basis_size);

  // cos(phi - 2 pi phi_ext) from the eigendecomposition of its argument,
  // averaging exp(+iX) and exp(-iX): exactly Hermitian at any truncation.
  Matrix arg = phi - kTwoPi * params.phi_ext *
                         Matrix::Identity(basis_size, basis_size);
  EigenDecomposition ed = eigh(arg);
  Matrix cosx = ed.vectors *
                ed.values.array().cos().matrix().asDiagonal() *
                ed.vectors.adjoint();

  Matrix h = 4.0 * params.e_c * (n * n) + 0.5 * params.e_l * (phi * phi) -
             params.e_j * cosx;
  return (h + h.adjoint()) / 2.0;
}

FluxoniumEigenbasis diagonalize_fluxonium(const Matrix& h, int n_levels) {
  if (n_levels <= 0) throw DomainError("n_levels must be positive");
  if (n_levels > h.rows())
    throw DomainError("n_levels exceeds construction basis size");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("hamiltonian is not Hermitian");
  EigenDecomposition ed = eigh(h);
  FluxoniumEigenbasis out;
  out.n_levels_kept = n_levels;
  out.energies = ed.values.head(n_levels);
  out.states = ed.vectors.leftCols(n_levels);
  return out;
}

FluxoniumEigenbasis solve_fluxonium(const FluxoniumParams& params,
                                    int n_levels, int basis_size) {
  Matrix h = build_fluxonium_hamiltonian(params, basis_size);
  FluxoniumEigenbasis basis = diagonalize_fluxonium(h, n_levels);
  Matrix n = charge_operator(params, basis_size);
  basis.charge_elements = basis.states.adjoint() * n * basis.states;
  basis.charge_elements =
      (basis.charge_elements + basis.charge_elements.adjoint()) / 2.0;
  return basis;
}

double qubit_frequency(const FluxoniumParams& params, int basis_size) {
  FluxoniumEigenbasis basis = solve_fluxonium(params, 2, basis_size);
  return basis.energies[1] - basis.energies[0];
}

}  // namespace fluxsim
