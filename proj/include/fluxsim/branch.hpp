#pragma once

#include <string>
#include <vector>

#include "fluxsim/composite.hpp"
#include "fluxsim/types.hpp"

namespace fluxsim {

struct BranchMember {
  int n = 0;                  // photon index along the branch
  double energy = 0;          // GHz
  RealVector flux_probs;      // <psi| Pi_q |psi> per fluxonium level
  double mean_flux_index = 0;
};

struct Branch {
  int label = 0;  // fluxonium origin state
  std::vector<BranchMember> members;
};

// Partition the static (or TLS-extended) eigenstates into branches by
// fluxonium character, continued in photon number by maximal overlap.
std::vector<Branch> compute_branches(const DeviceParams& dev,
                                     const std::optional<TlsParams>& tls,
                                     const HilbertSpec& spec, double epsilon,
                                     int n_levels_tracked,
                                     int basis_size = kDefaultBasisSize);

// Photon number at which a branch's population on `target_level` first
// exceeds `threshold`; -1 when it never does.
int branch_transfer_onset(const Branch& branch, int target_level,
                          double threshold);

// Diabatic passage probability e^{-pi gap^2 / (2 v)} through an avoided
// crossing. gap is a linear frequency in GHz; velocity is the sweep rate of
// the linear transition frequency in GHz per microsecond (n_bar kappa for a
// square pulse, with kappa in GHz and the photon ramp time ~1/kappa in us
// scale). The angular conversion is applied internally.
double landau_zener_probability(double gap_ghz, double velocity_ghz_per_us);

}  // namespace fluxsim
