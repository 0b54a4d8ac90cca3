#include "fluxsim/branch.hpp"

#include <cmath>

#include "fluxsim/linalg.hpp"

namespace fluxsim {

namespace {

Matrix fock_ladder(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) a(i - 1, i) = std::sqrt(double(i));
  return a;
}

RealVector flux_probabilities(const Vector& psi, const HilbertSpec& spec) {
  RealVector p = RealVector::Zero(spec.n_flux);
  int per_q = spec.n_fock * spec.n_tls();
  for (int q = 0; q < spec.n_flux; ++q)
    p[q] = psi.segment(q * per_q, per_q).squaredNorm();
  return p;
}

}  // namespace

std::vector<Branch> compute_branches(const DeviceParams& dev,
                                     const std::optional<TlsParams>& tls,
                                     const HilbertSpec& spec, double epsilon,
                                     int n_levels_tracked, int basis_size) {
  if (epsilon != 0)
    throw DomainError(
        "branch analysis is defined on the undriven spectrum (epsilon = 0); "
        "the photon axis is the branch member's resonator excitation index");
  if (n_levels_tracked < 1 || n_levels_tracked > spec.n_flux)
    throw DomainError("n_levels_tracked out of range");

  Matrix h = build_system_hamiltonian(dev, tls, spec, basis_size);
  EigenDecomposition ed = eigh(h);
  const int dim = static_cast<int>(ed.values.size());
  Matrix adag = lift_fock(fock_ladder(spec.n_fock), spec).adjoint();

  std::vector<bool> assigned(dim, false);
  std::vector<Branch> branches;
  const int n_max = spec.n_fock - 2;

  for (int q = 0; q < n_levels_tracked; ++q) {
    Branch b;
    b.label = q;
    // seed: eigenstate with maximal overlap on the bare |q, 0, 0>
    int bare = product_index(q, 0, 0, spec);
    int cur = -1;
    double best = -1;
    for (int j = 0; j < dim; ++j) {
      if (assigned[j]) continue;
      double w = std::norm(ed.vectors(bare, j));
      if (w > best) {
        best = w;
        cur = j;
      }
    }
    for (int n = 0; n <= n_max; ++n) {
      assigned[cur] = true;
      BranchMember m;
      m.n = n;
      m.energy = ed.values[cur];
      m.flux_probs = flux_probabilities(ed.vectors.col(cur), spec);
      for (int x = 0; x < spec.n_flux; ++x)
        m.mean_flux_index += x * m.flux_probs[x];
      b.members.push_back(std::move(m));
      if (n == n_max) break;

      // continue by maximal overlap with the photon-raised member
      Vector target = adag * ed.vectors.col(cur);
      target.normalize();
      int next = -1;
      double w1 = -1, w2 = -1;
      for (int j = 0; j < dim; ++j) {
        if (assigned[j]) continue;
        double w = std::norm(ed.vectors.col(j).dot(target));
        if (w > w1) {
          w2 = w1;
          w1 = w;
          next = j;
        } else if (w > w2) {
          w2 = w;
        }
      }
      if (next < 0) break;
      // near-tie: deterministic lower-index continuation, recorded as a
      // crossing by keeping the smaller eigenindex among the two candidates
      if (w2 > 0 && w1 - w2 < 0.05) {
        for (int j = 0; j < dim; ++j) {
          if (assigned[j] || j == next) continue;
          double w = std::norm(ed.vectors.col(j).dot(target));
          if (std::abs(w - w2) < 1e-12 && j < next && w1 - w < 0.05) next = j;
        }
      }
      cur = next;
    }
    branches.push_back(std::move(b));
  }
  return branches;
}

int branch_transfer_onset(const Branch& branch, int target_level,
                          double threshold) {
  for (const BranchMember& m : branch.members)
    if (m.flux_probs[target_level] > threshold) return m.n;
  return -1;
}

double landau_zener_probability(double gap_ghz, double velocity_ghz_per_us) {
  if (gap_ghz < 0) throw DomainError("gap must be nonnegative");
  if (!(velocity_ghz_per_us > 0)) throw DomainError("velocity must be positive");
  // angular gap in rad/us, angular sweep rate in rad/us^2
  double gap_ang = kTwoPi * gap_ghz * 1e3;
  double v_ang = kTwoPi * velocity_ghz_per_us * 1e3;
  double expo = -M_PI * gap_ang * gap_ang / (2.0 * v_ang);
  return std::exp(expo);
}

}  // namespace fluxsim
