#include "fluxsim/composite.hpp"

#include <cmath>

#include "fluxsim/linalg.hpp"

namespace fluxsim {

void DeviceParams::validate() const {
  fluxonium.validate();
  if (!(g > 0) || !(omega_r > 0) || !(kappa > 0))
    throw DomainError("g, omega_r, kappa must be positive");
}

void TlsParams::validate() const {
  if (!(delta_tls > 0)) throw DomainError("delta_tls must be positive");
  if (g_tls < 0) throw DomainError("g_tls must be nonnegative");
  if (temperature < 0) throw DomainError("temperature must be nonnegative");
  if (photon_order < 0) throw DomainError("photon_order must be nonnegative");
}

void DriveParams::validate() const {
  if (epsilon < 0) throw DomainError("epsilon must be nonnegative");
}

void HilbertSpec::validate() const {
  if (n_flux < 2 || n_fock < 2) throw DomainError("hilbert dimensions must be >= 2");
  if (n_sidebands < 1 || n_sidebands % 2 == 0)
    throw DomainError("n_sidebands must be odd and positive");
  if (product_dim() > kProductDimensionCap)
    throw ResourceError("product dimension exceeds cap");
}

int product_index(int q, int n, int t, const HilbertSpec& spec) {
  return (q * spec.n_fock + n) * spec.n_tls() + t;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix fock_ladder(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) a(i - 1, i) = std::sqrt(double(i));
  return a;
}

}  // namespace

Matrix lift_flux(const Matrix& op, const HilbertSpec& spec) {
  Matrix rest = Matrix::Identity(spec.n_fock * spec.n_tls(),
                                 spec.n_fock * spec.n_tls());
  return kron(op, rest);
}

Matrix lift_fock(const Matrix& op, const HilbertSpec& spec) {
  Matrix f = Matrix::Identity(spec.n_flux, spec.n_flux);
  Matrix t = Matrix::Identity(spec.n_tls(), spec.n_tls());
  return kron(kron(f, op), t);
}

Matrix lift_tls(const Matrix& op, const HilbertSpec& spec) {
  Matrix fr = Matrix::Identity(spec.n_flux * spec.n_fock,
                               spec.n_flux * spec.n_fock);
  return kron(fr, op);
}

Matrix build_static_hamiltonian(const DeviceParams& dev,
                                const HilbertSpec& spec, int basis_size) {
  dev.validate();
  spec.validate();
  if (spec.n_flux > basis_size)
    throw DomainError("n_flux exceeds fluxonium construction basis");

  FluxoniumEigenbasis fb = solve_fluxonium(dev.fluxonium, spec.n_flux, basis_size);
  Matrix hf = (fb.energies.array() - fb.energies[0]).matrix()
                  .asDiagonal()
                  .toDenseMatrix()
                  .cast<Complex>();
  Matrix nmat = fb.charge_elements;
  Matrix a = fock_ladder(spec.n_fock);

  Matrix h = lift_flux(hf, spec) +
             dev.omega_r * lift_fock((a.adjoint() * a).eval(), spec) -
             Complex(0, 1) * dev.g *
                 (lift_flux(nmat, spec) * lift_fock((a - a.adjoint()).eval(), spec));
  return (h + h.adjoint()) / 2.0;
}

Matrix extend_with_tls(const Matrix& h, const TlsParams& tls,
                       const DeviceParams& dev, const HilbertSpec& spec,
                       int basis_size) {
  tls.validate();
  if (!spec.tls_present) throw DomainError("spec has no TLS factor");
  FluxoniumEigenbasis fb = solve_fluxonium(dev.fluxonium, spec.n_flux, basis_size);

  Matrix z = Matrix::Zero(2, 2);
  z(1, 1) = 1.0;  // excitation-number convention: diag(0, Delta)
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;

  Matrix out = h + tls.delta_tls * lift_tls(z, spec) +
               tls.g_tls * (lift_flux(fb.charge_elements, spec) * lift_tls(x, spec));
  return (out + out.adjoint()) / 2.0;
}

Matrix build_system_hamiltonian(const DeviceParams& dev,
                                const std::optional<TlsParams>& tls,
                                const HilbertSpec& spec, int basis_size) {
  Matrix h = build_static_hamiltonian(dev, spec, basis_size);
  if (spec.tls_present) {
    if (!tls) throw DomainError("tls_present set but no TLS parameters given");
    h = extend_with_tls(h, *tls, dev, spec, basis_size);
  }
  return h;
}

Matrix build_driven_hamiltonian(const DeviceParams& dev,
                                const DriveParams& drive,
                                const HilbertSpec& spec, double t_ns,
                                int basis_size) {
  drive.validate();
  Matrix h = build_static_hamiltonian(dev, spec, basis_size);
  Matrix a = fock_ladder(spec.n_fock);
  double c = std::cos(kGHzToAngularPerNs * drive.omega_d * t_ns);
  h += -Complex(0, 1) * drive.epsilon * c * lift_fock((a - a.adjoint()).eval(), spec);
  return (h + h.adjoint()) / 2.0;
}

DressedSystem dress(const Matrix& h, const HilbertSpec& spec) {
  EigenDecomposition ed = eigh(h);
  DressedSystem out;
  out.energies = ed.values;
  out.states = std::move(ed.vectors);
  out.spec = spec;
  const int dim = static_cast<int>(out.energies.size());
  out.label_of.assign(dim, -1);
  // Each eigenvector claims its dominant bare product state; conflicts
  // resolved in favor of the larger overlap, ties by lower eigenindex.
  std::vector<double> claim(dim, 0.0);
  std::vector<int> owner(dim, -1);
  for (int j = 0; j < dim; ++j) {
    int best = 0;
    double w = 0;
    for (int s = 0; s < dim; ++s) {
      double p = std::norm(out.states(s, j));
      if (p > w) {
        w = p;
        best = s;
      }
    }
    if (w > claim[best]) {
      claim[best] = w;
      owner[best] = j;
    }
  }
  for (int s = 0; s < dim; ++s)
    if (owner[s] >= 0) out.label_of[owner[s]] = s;
  return out;
}

int DressedSystem::eigen_index(int q, int n, int t) const {
  int target = product_index(q, n, t, spec);
  for (size_t j = 0; j < label_of.size(); ++j)
    if (label_of[j] == target) return static_cast<int>(j);
  throw ConvergenceError("dressed-state labeling ambiguity for bare index " +
                         std::to_string(target));
}

double DressedSystem::energy(int q, int n, int t) const {
  return energies[eigen_index(q, n, t)];
}

double dispersive_shift(const DeviceParams& dev, const HilbertSpec& spec,
                        int basis_size) {
  HilbertSpec s = spec;
  s.tls_present = false;
  Matrix h = build_static_hamiltonian(dev, s, basis_size);
  DressedSystem d = dress(h, s);
  double fe = d.energy(1, 1) - d.energy(1, 0);
  double fg = d.energy(0, 1) - d.energy(0, 0);
  return (fe - fg) / 2.0;
}

double stark_shifted_qubit_frequency(const DeviceParams& dev, double n_bar,
                                     const HilbertSpec& spec, int basis_size) {
  if (n_bar < 0) throw DomainError("n_bar must be nonnegative");
  HilbertSpec s = spec;
  s.tls_present = false;
  Matrix h = build_static_hamiltonian(dev, s, basis_size);
  DressedSystem d = dress(h, s);
  double wq0 = d.energy(1, 0) - d.energy(0, 0);
  double chi = ((d.energy(1, 1) - d.energy(1, 0)) -
                (d.energy(0, 1) - d.energy(0, 0))) / 2.0;
  return wq0 + 2.0 * chi * n_bar;
}

double resonance_shift_prediction(double delta_omega_ge_ghz, double chi_ghz) {
  if (chi_ghz == 0) throw DomainError("chi must be nonzero");
  return -delta_omega_ge_ghz / (2.0 * chi_ghz);
}

double tls_thermal_population(const TlsParams& tls, double omega_d_ghz) {
  tls.validate();
  if (tls.temperature == 0) return 0.0;
  double delta0 = tls.delta_tls - 2.0 * tls.photon_order * omega_d_ghz;
  double e_ghz = delta0 + tls.photon_order * omega_d_ghz;
  double beta_e = kPlanckJs * e_ghz * kGHzToHz /
                  (kBoltzmannJperK * tls.temperature);
  return 1.0 / (1.0 + std::exp(beta_e));
}

}  // namespace fluxsim
