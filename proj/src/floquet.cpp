#include "fluxsim/floquet.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <omp.h>

namespace fluxsim {

Matrix FloquetLattice::translation() const {
  Matrix t = Matrix::Zero(n_sidebands, n_sidebands);
  for (int i = 0; i + 1 < n_sidebands; ++i) t(i + 1, i) = 1.0;
  return t;
}

Vector FloquetModel::initial_state(int level) const {
  if (level < 0 || level >= spec.n_flux)
    throw DomainError("initial level outside kept fluxonium levels");
  Vector psi = Vector::Zero(floquet_dim());
  int center = sideband_offset();
  psi[center * product_dim() + product_index(level, 0, 0, spec)] = 1.0;
  return psi;
}

namespace {

Matrix fock_ladder(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) a(i - 1, i) = std::sqrt(double(i));
  return a;
}

// Apply a product-space operator blockwise on the sideband lattice
// (op on each diagonal block): y = (1 x op) x.
Matrix lift_to_lattice(const Matrix& op, int n_sidebands) {
  const int d = static_cast<int>(op.rows());
  Matrix out = Matrix::Zero(d * n_sidebands, d * n_sidebands);
  for (int s = 0; s < n_sidebands; ++s)
    out.block(s * d, s * d, d, d) = op;
  return out;
}

// op x (sideband shift by `shift`): nonzero blocks (k + shift, k).
Matrix lattice_shifted(const Matrix& op, int n_sidebands, int shift) {
  const int d = static_cast<int>(op.rows());
  Matrix out = Matrix::Zero(d * n_sidebands, d * n_sidebands);
  for (int k = 0; k < n_sidebands; ++k) {
    int kk = k + shift;
    if (kk < 0 || kk >= n_sidebands) continue;
    out.block(kk * d, k * d, d, d) = op;
  }
  return out;
}

}  // namespace

FloquetModel build_floquet_model(const DeviceParams& dev,
                                 const DriveParams& drive,
                                 const std::optional<TlsParams>& tls,
                                 const HilbertSpec& spec, int initial_level,
                                 const SolverOptions& opts) {
  dev.validate();
  drive.validate();
  spec.validate();

  FloquetModel m;
  m.dev = dev;
  m.tls = tls;
  m.spec = spec;
  m.drive = drive;
  m.initial_level = initial_level;
  m.h0 = build_system_hamiltonian(dev, tls, spec, opts.basis_size);

  // Dressed resonator frequency conditioned on the initial qubit state.
  DressedSystem ds = dress(m.h0, spec);
  double omega_dressed =
      ds.energy(initial_level, 1, 0) - ds.energy(initial_level, 0, 0);
  double omega = drive.omega_d > 0 ? drive.omega_d : omega_dressed;
  m.drive.omega_d = omega;
  m.omega_eff = opts.dressed_frame ? omega_dressed : dev.omega_r;

  // Classical resonator response to epsilon cos(Omega t) on -i(a - a^dag):
  // <a>(t) = alpha_+ e^{-i Omega t} + alpha_- e^{+i Omega t}.
  double half_kappa = dev.kappa / 2.0;
  double half_eps = m.drive.epsilon / 2.0;
  m.alpha_plus = half_eps / Complex(half_kappa, m.omega_eff - omega);
  m.alpha_minus = half_eps / Complex(half_kappa, m.omega_eff + omega);

  m.d_op = lift_fock(fock_ladder(spec.n_fock), spec);

  // Displacing a -> d + alpha(t) turns the drive into a periodic fluxonium
  // term -i g n (alpha(t) - conj(alpha(t))); its e^{-i Omega t} harmonic:
  FluxoniumEigenbasis fb =
      solve_fluxonium(dev.fluxonium, spec.n_flux, opts.basis_size);
  Complex v_coef =
      Complex(0, -1) * dev.g * (m.alpha_plus - std::conj(m.alpha_minus));
  Matrix h_minus1 = v_coef * lift_flux(fb.charge_elements, spec);

  const int d = m.product_dim();
  const int nsb = spec.n_sidebands;
  const int offset = nsb / 2;
  m.f = Matrix::Zero(d * nsb, d * nsb);
  for (int i = 0; i < nsb; ++i) {
    int k = i - offset;
    m.f.block(i * d, i * d, d, d) =
        m.h0 + double(k) * omega * Matrix::Identity(d, d);
    if (i + 1 < nsb) {
      // F_{k,k'} = H_{k'-k}: upper block H_{+1}, lower block H_{-1}
      m.f.block(i * d, (i + 1) * d, d, d) = h_minus1.adjoint();
      m.f.block((i + 1) * d, i * d, d, d) = h_minus1;
    }
  }
  return m;
}

Matrix Lindbladian::apply(const Matrix& rho) const {
  Matrix comm = (*f) * rho - rho * (*f);
  Matrix jr = jump * rho * jump.adjoint();
  Matrix jj = jump.adjoint() * jump;
  return Complex(0, -kTwoPi) * comm +
         kTwoPi * kappa_ghz * (jr - 0.5 * (jj * rho + rho * jj));
}

Lindbladian build_lindbladian(const Matrix& f, double kappa_ghz,
                              const FloquetLattice& lattice,
                              const Matrix& jump_product) {
  if ((f - f.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, f.cwiseAbs().maxCoeff()))
    throw DomainError("floquet hamiltonian not Hermitian");
  Lindbladian l;
  l.f = &f;
  l.kappa_ghz = kappa_ghz;
  // In the displaced frame the resonator jump operator is time independent,
  // so its lattice lift is blockwise; a single sideband degenerates to the
  // plain static dissipator.
  l.jump = lift_to_lattice(jump_product, lattice.n_sidebands);
  return l;
}

QuasiEigenbasis select_quasi_eigenbasis(const Matrix& f, const Vector& psi0,
                                        int k_kept) {
  if (psi0.size() != f.rows()) throw DomainError("psi0 dimension mismatch");
  double e0 = std::real(psi0.dot(f * psi0)) / std::real(psi0.dot(psi0));
  SparseMatrix fs = f.sparseView(1e-14, 1.0);
  EigenDecomposition win = eigh_window(fs, e0, k_kept);
  QuasiEigenbasis out;
  out.center_energy = e0;
  out.quasi_energies = std::move(win.values);
  out.states = std::move(win.vectors);
  out.k_kept = k_kept;
  return out;
}

namespace {

// Fixed-pattern sparse operator whose entries rotate as e^{i w t}.
struct RotatingSparse {
  SparseMatrix pattern;           // compressed, base values
  std::vector<Complex> base;      // aligned with pattern.valuePtr()
  std::vector<double> omega;      // angular, per stored entry

  void at_time(double t, SparseMatrix& out) const {
    Complex* v = out.valuePtr();
    for (size_t i = 0; i < base.size(); ++i)
      v[i] = base[i] * std::exp(Complex(0, omega[i] * t));
  }
};

struct ReducedGenerator {
  int k = 0;
  double kappa_ang = 0;
  RealVector lam;                   // quasi-energies, GHz
  RotatingSparse slow;              // near-degenerate jump elements
  Eigen::MatrixXd gamma;            // secular rates from fast elements
  Eigen::VectorXd out_rate;
  SparseMatrix work;                // pattern copy updated per eval

  // Interaction-picture derivative of sigma.
  Matrix rhs(double t, const Matrix& s) {
    slow.at_time(t, work);
    Matrix t1 = work * s;
    Matrix out = kappa_ang * (t1 * work.adjoint());
    SparseMatrix odo = (work.adjoint() * work).pruned();
    out.noalias() -= (0.5 * kappa_ang) * (odo * s + s * odo);
    Eigen::VectorXd pops = s.diagonal().real();
    Eigen::VectorXd gain = gamma * pops;
    for (int i = 0; i < k; ++i) out(i, i) += gain[i];
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < k; ++i)
        out(i, j) -= 0.5 * (out_rate[i] + out_rate[j]) * s(i, j);
    return out;
  }

  double omega_ij(int i, int j) const {
    return kTwoPi * (lam[i] - lam[j]);
  }
};

ReducedGenerator make_generator(const QuasiEigenbasis& basis,
                                const Matrix& jump_reduced, double kappa_ghz,
                                double cutoff_ghz) {
  ReducedGenerator g;
  g.k = basis.k_kept;
  g.kappa_ang = kTwoPi * kappa_ghz;
  g.lam = basis.quasi_energies;

  std::vector<Eigen::Triplet<Complex>> trip;
  g.gamma = Eigen::MatrixXd::Zero(g.k, g.k);
  double cutoff_ang = kTwoPi * cutoff_ghz;
  for (int j = 0; j < g.k; ++j) {
    for (int i = 0; i < g.k; ++i) {
      Complex v = jump_reduced(i, j);
      if (std::abs(v) < 1e-14) continue;
      double w = g.omega_ij(i, j);
      if (std::abs(w) <= cutoff_ang) {
        trip.emplace_back(i, j, v);
      } else {
        g.gamma(i, j) += g.kappa_ang * std::norm(v);
      }
    }
  }
  g.out_rate = g.gamma.colwise().sum().transpose();

  g.slow.pattern.resize(g.k, g.k);
  g.slow.pattern.setFromTriplets(trip.begin(), trip.end());
  g.slow.pattern.makeCompressed();
  const Complex* v = g.slow.pattern.valuePtr();
  const int nnz = static_cast<int>(g.slow.pattern.nonZeros());
  g.slow.base.assign(v, v + nnz);
  g.slow.omega.resize(nnz);
  int idx = 0;
  for (int col = 0; col < g.slow.pattern.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(g.slow.pattern, col); it; ++it)
      g.slow.omega[idx++] = g.omega_ij(static_cast<int>(it.row()), col);
  g.work = g.slow.pattern;
  return g;
}

// Dormand-Prince 5(4) with PI step control on a matrix-valued state.
template <typename Rhs>
Matrix integrate_rk45(Rhs&& rhs, Matrix y, double t0, double t1, double rtol,
                      double atol) {
  static const double c[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1., 1.};
  static const double a2[] = {1. / 5};
  static const double a3[] = {3. / 40, 9. / 40};
  static const double a4[] = {44. / 45, -56. / 15, 32. / 9};
  static const double a5[] = {19372. / 6561, -25360. / 2187, 64448. / 6561,
                              -212. / 729};
  static const double a6[] = {9017. / 3168, -355. / 33, 46732. / 5247,
                              49. / 176, -5103. / 18656};
  static const double b[] = {35. / 384, 0, 500. / 1113, 125. / 192,
                             -2187. / 6784, 11. / 84};
  static const double e[] = {71. / 57600,     0,           -71. / 16695,
                             71. / 1920,      -17253. / 339200,
                             22. / 525,       -1. / 40};

  double t = t0;
  double h = (t1 - t0) * 1e-4;
  Matrix k1 = rhs(t, y);
  int max_steps = 1000000;
  double prev_err = 1.0;
  while (t < t1 && max_steps-- > 0) {
    if (t + h > t1) h = t1 - t;
    Matrix k2 = rhs(t + c[1] * h, (y + h * a2[0] * k1).eval());
    Matrix k3 = rhs(t + c[2] * h, (y + h * (a3[0] * k1 + a3[1] * k2)).eval());
    Matrix k4 = rhs(t + c[3] * h,
                    (y + h * (a4[0] * k1 + a4[1] * k2 + a4[2] * k3)).eval());
    Matrix k5 = rhs(t + c[4] * h, (y + h * (a5[0] * k1 + a5[1] * k2 +
                                            a5[2] * k3 + a5[3] * k4)).eval());
    Matrix k6 = rhs(t + h, (y + h * (a6[0] * k1 + a6[1] * k2 + a6[2] * k3 +
                                     a6[3] * k4 + a6[4] * k5)).eval());
    Matrix ynew = y + h * (b[0] * k1 + b[2] * k3 + b[3] * k4 + b[4] * k5 +
                           b[5] * k6);
    Matrix k7 = rhs(t + h, ynew);
    Matrix err = h * (e[0] * k1 + e[2] * k3 + e[3] * k4 + e[4] * k5 +
                      e[5] * k6 + e[6] * k7);

    double sq_sum = 0;
    const Complex* ep = err.data();
    const Complex* yp = y.data();
    const Complex* np = ynew.data();
    const long n = err.size();
    for (long i = 0; i < n; ++i) {
      double sc = atol + rtol * std::max(std::abs(yp[i]), std::abs(np[i]));
      double r = std::abs(ep[i]) / sc;
      sq_sum += r * r;
    }
    double err_norm = std::sqrt(sq_sum / double(n));
    if (err_norm <= 1.0) {
      t += h;
      y = std::move(ynew);
      k1 = std::move(k7);
      double fac = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.7 / 5.0) *
                   std::pow(prev_err, 0.4 / 5.0);
      h *= std::min(5.0, std::max(0.2, fac));
      prev_err = std::max(err_norm, 1e-10);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -1.0 / 5.0));
    }
    if (h < 1e-12 * (t1 - t0))
      throw ConvergenceError("rk45: step size underflow");
  }
  if (max_steps <= 0) throw ConvergenceError("rk45: step budget exhausted");
  return y;
}

Matrix reduce_op(const Matrix& states, const Matrix& full_op) {
  return states.adjoint() * full_op * states;
}

}  // namespace

EvolveResult evolve_to_fixed_point(const FloquetModel& model,
                                   const QuasiEigenbasis& basis,
                                   const Vector& psi0,
                                   const SolverOptions& opts) {
  auto t_start = std::chrono::steady_clock::now();
  const int k = basis.k_kept;
  const int d = model.product_dim();
  const int nsb = model.spec.n_sidebands;
  const Matrix& v = basis.states;

  Matrix jump_red(k, k);
  {
    // (1 x d_op) V, applied per sideband block
    Matrix jv(v.rows(), k);
    for (int s = 0; s < nsb; ++s)
      jv.middleRows(s * d, d).noalias() =
          model.d_op * v.middleRows(s * d, d);
    jump_red.noalias() = v.adjoint() * jv;
  }

  ReducedGenerator gen = make_generator(basis, jump_red, model.dev.kappa,
                                        opts.secular_cutoff_ghz);

  Vector c0 = v.adjoint() * psi0;
  double capture = c0.squaredNorm() / psi0.squaredNorm();
  Matrix sigma = (c0 * c0.adjoint()) / c0.squaredNorm();

  double t_end = opts.duration_factor / model.dev.kappa;
  sigma = integrate_rk45([&](double t, const Matrix& s) { return gen.rhs(t, s); },
                         std::move(sigma), 0.0, t_end, opts.rtol, opts.atol);
  sigma = (sigma + sigma.adjoint()).eval() / 2.0;

  // Full-generator residual: || -i[Lambda, rho] + D(rho) ||_F, phase-invariant
  // so it can be evaluated on sigma directly.
  Matrix sdot = gen.rhs(t_end, sigma);
  double resid_sq = 0;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      Complex r = sdot(i, j) - Complex(0, gen.omega_ij(i, j)) * sigma(i, j);
      resid_sq += std::norm(r);
    }
  double residual = std::sqrt(resid_sq) / sigma.norm();

  // Back to the lab picture at t_end.
  Matrix rho = sigma;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i)
      rho(i, j) *= std::exp(Complex(0, -gen.omega_ij(i, j) * t_end));

  EvolveResult out;
  out.rho_reduced = rho;
  out.capture = capture;
  out.k_used = k;
  out.residual = residual;
  out.converged = residual < opts.fixed_point_rtol;

  const HilbertSpec& spec = model.spec;
  Matrix num_fock = Matrix::Zero(spec.n_fock, spec.n_fock);
  for (int n = 0; n < spec.n_fock; ++n) num_fock(n, n) = n;
  Matrix n_red = reduce_op(v, lift_to_lattice(lift_fock(num_fock, spec), nsb));
  double n_fluct = std::real((n_red * rho).trace());

  // Harmonics of <d>: coefficient of e^{-i m Omega t} pairs with the
  // sideband shift by -m.
  Matrix d_up = reduce_op(v, lattice_shifted(model.d_op, nsb, -1));
  Matrix d_dn = reduce_op(v, lattice_shifted(model.d_op, nsb, +1));
  Complex d_p1 = (d_up * rho).trace();
  Complex d_m1 = (d_dn * rho).trace();
  double cross = 2.0 * std::real(std::conj(model.alpha_plus) * d_p1 +
                                 std::conj(model.alpha_minus) * d_m1);
  out.n_bar = std::norm(model.alpha_plus) + std::norm(model.alpha_minus) +
              n_fluct + cross;

  out.populations.resize(spec.n_flux);
  for (int q = 0; q < spec.n_flux; ++q) {
    Matrix proj_q = Matrix::Zero(spec.n_flux, spec.n_flux);
    proj_q(q, q) = 1.0;
    Matrix p_red = reduce_op(v, lift_to_lattice(lift_flux(proj_q, spec), nsb));
    out.populations[q] = std::real((p_red * rho).trace());
  }
  out.p_other = 0;
  for (int q = 5; q < spec.n_flux; ++q) out.p_other += out.populations[q];

  {
    double w = 0;
    for (int j = 0; j < k; ++j) {
      double pj = std::real(rho(j, j));
      double head = v.col(j).head(d).squaredNorm();
      double tail = v.col(j).tail(d).squaredNorm();
      w += pj * (head + tail);
    }
    out.edge_population = nsb > 1 ? w : 0.0;
  }

  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
  return out;
}

EvolveResult run_steady_state(const FloquetModel& model,
                              const SolverOptions& opts) {
  Vector psi0 = model.initial_state(model.initial_level);
  const int dim = model.floquet_dim();

  // Dense spectrum computed once; window selection reuses it across the
  // automatic k doubling.
  EigenDecomposition full;
  bool dense_path = dim <= 3500;
  if (dense_path) full = eigh(model.f);
  double e0 = std::real(psi0.dot(model.f * psi0));

  int k = std::min(opts.k_kept, dim);
  EvolveResult best;
  for (int attempt = 0; attempt <= opts.max_k_doublings; ++attempt) {
    QuasiEigenbasis basis;
    if (dense_path) {
      std::vector<int> idx(dim);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(full.values[a] - e0) < std::abs(full.values[b] - e0);
      });
      idx.resize(k);
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return full.values[a] < full.values[b]; });
      basis.center_energy = e0;
      basis.k_kept = k;
      basis.quasi_energies.resize(k);
      basis.states.resize(dim, k);
      for (int j = 0; j < k; ++j) {
        basis.quasi_energies[j] = full.values[idx[j]];
        basis.states.col(j) = full.vectors.col(idx[j]);
      }
    } else {
      basis = select_quasi_eigenbasis(model.f, psi0, k);
    }
    double capture = (basis.states.adjoint() * psi0).squaredNorm();
    if (capture >= opts.capture_min || k >= dim ||
        attempt == opts.max_k_doublings) {
      if (capture < opts.capture_min)
        throw ConvergenceError(
            "quasi-eigenbasis capture " + std::to_string(capture) +
            " below threshold at k_kept=" + std::to_string(k));
      return evolve_to_fixed_point(model, basis, psi0, opts);
    }
    k = std::min(2 * k, dim);
  }
  throw ConvergenceError("quasi-eigenbasis selection failed");
}

std::vector<QndCurve> sweep_qnd_curves(
    const DeviceParams& dev, const std::optional<TlsParams>& tls,
    const HilbertSpec& spec, const std::vector<double>& epsilon_grid,
    const std::vector<std::string>& initial_states, const SolverOptions& opts,
    double omega_d_override, int n_threads) {
  if (epsilon_grid.empty()) throw DomainError("empty epsilon grid");
  std::vector<QndCurve> curves(initial_states.size());
  for (size_t s = 0; s < initial_states.size(); ++s) {
    curves[s].initial_state = initial_states[s];
    curves[s].points.resize(epsilon_grid.size());
  }

  const long total = static_cast<long>(initial_states.size()) *
                     static_cast<long>(epsilon_grid.size());
  if (n_threads > 0) omp_set_num_threads(n_threads);
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < total; ++idx) {
    size_t s = idx / epsilon_grid.size();
    size_t p = idx % epsilon_grid.size();
    QndPoint& pt = curves[s].points[p];
    pt.epsilon = epsilon_grid[p];
    try {
      int level = level_index_from_label(initial_states[s]);
      DriveParams drive{epsilon_grid[p], omega_d_override};
      FloquetModel model =
          build_floquet_model(dev, drive, tls, spec, level, opts);
      EvolveResult r = run_steady_state(model, opts);
      pt.n_bar = r.n_bar;
      pt.probabilities = r.populations;
      pt.p_other = r.p_other;
      pt.converged = r.converged;
    } catch (const std::exception& ex) {
      pt.error = ex.what();
      pt.converged = false;
    }
  }
  return curves;
}

}  // namespace fluxsim
