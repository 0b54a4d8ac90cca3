#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fluxsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// All energies are linear frequencies in GHz (X/2pi); time is in ns.
// Factors of 2pi enter only at time-evolution boundaries.
inline constexpr double kGHzToAngularPerNs = kTwoPi;

// Planck constant in J*s, for watts -> photons conversions.
inline constexpr double kPlanckJs = 6.62607015e-34;
inline constexpr double kBoltzmannJperK = 1.380649e-23;
inline constexpr double kGHzToHz = 1e9;

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fluxonium level labels: g,e,f,h,i <-> eigenstate indices 0..4.
// "o" (other) means any index >= 2.
int level_index_from_label(const std::string& label);
std::string level_label_from_index(int index);

}  // namespace fluxsim
