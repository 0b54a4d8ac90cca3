#pragma once

#include <cstdint>
#include <vector>

#include "fluxsim/types.hpp"

namespace fluxsim {

struct Shot {
  double i = 0;
  double q = 0;
};

struct ShotTable {
  std::vector<Shot> initial;
  std::vector<Shot> final;

  size_t n_shots() const { return initial.size(); }
  void validate() const;
};

struct GaussianFit {
  std::vector<Shot> centers;  // in the rotated frame
  double sigma = 1;           // shared standard deviation
  std::vector<double> weights;
  double rotation = 0;        // radians applied to align the qubit pair with I
  bool degenerate_flag = false;
};

struct ErrorMatrix {
  int dimension = 2;
  Eigen::MatrixXd e;  // column y: true state, row x: assigned P(x|y)

  void validate() const;
};

ErrorMatrix error_matrix_2state(double p_err);  // symmetric P(e|g)=P(g|e)
ErrorMatrix error_matrix_3state(double p_eg, double p_og, double p_oe);

// Gaussian mixture fit of IQ shots: rotate so the two main clusters lie
// along I (third along Q), then fit marginal histograms, 101 bins for
// initialization, shared sigma refined on raw shots.
GaussianFit fit_readout_gaussians(const std::vector<Shot>& shots,
                                  int n_components);

// P_err = (1 - erf(sqrt(snr / 8))) / 2.
double assignment_error_probability(double snr);

// E^{-1} counts, negative entries clipped to zero and renormalized.
struct CorrectedCounts {
  Eigen::VectorXd values;
  bool clipped_flag = false;
};
CorrectedCounts correct_counts(const Eigen::VectorXd& counts,
                               const ErrorMatrix& e);

struct TransitionStats {
  Eigen::MatrixXd mean;  // P(final | initial), rows final, cols initial
  Eigen::MatrixXd sd;
};

// Paired initial/final labels, resampled with replacement n_samples times
// at sample_size each; each sample is error-corrected before averaging.
TransitionStats bootstrap_probabilities(
    const std::vector<std::pair<int, int>>& labeled_pairs, int n_states,
    int n_samples, int sample_size, const ErrorMatrix& e_init,
    const ErrorMatrix& e_final, uint64_t seed = 12345);

// Synthetic generator for round-trip tests and the stats CLI demo: draws
// initial states, applies a true transition matrix, then assignment noise.
std::vector<std::pair<int, int>> generate_synthetic_labels(
    const Eigen::VectorXd& initial_probs, const Eigen::MatrixXd& transition,
    const ErrorMatrix& e_init, const ErrorMatrix& e_final, int n_shots,
    uint64_t seed);

std::vector<Shot> generate_gaussian_shots(const std::vector<Shot>& centers,
                                          const std::vector<double>& weights,
                                          double sigma, int n_shots,
                                          uint64_t seed);

}  // namespace fluxsim
