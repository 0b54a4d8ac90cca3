#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "fluxsim/readout_stats.hpp"

using namespace fluxsim;

TEST_CASE("assignment error from separation SNR") {
  CHECK(assignment_error_probability(0.0) == doctest::Approx(0.5));
  // SNR 16 means the clusters sit 4 sigma apart: overlap of half-normals
  CHECK(assignment_error_probability(16.0) ==
        doctest::Approx(0.0227501).epsilon(1e-4));
  CHECK(assignment_error_probability(100.0) < 1e-5);
  CHECK(assignment_error_probability(4.0) >
        assignment_error_probability(9.0));
  CHECK_THROWS_AS(assignment_error_probability(-1.0), DomainError);
}

TEST_CASE("error matrix construction") {
  ErrorMatrix e2 = error_matrix_2state(0.05);
  CHECK(e2.dimension == 2);
  CHECK(e2.e(0, 0) == doctest::Approx(0.95));
  CHECK(e2.e(1, 0) == doctest::Approx(0.05));
  CHECK(e2.e(0, 1) == doctest::Approx(0.05));
  ErrorMatrix e3 = error_matrix_3state(0.04, 0.01, 0.02);
  CHECK(e3.dimension == 3);
  for (int c = 0; c < 3; ++c)
    CHECK(e3.e.col(c).sum() == doctest::Approx(1.0));
  CHECK(e3.e(1, 0) == doctest::Approx(0.04));  // e assigned, g prepared
  CHECK(e3.e(2, 0) == doctest::Approx(0.01));
  CHECK(e3.e(2, 1) == doctest::Approx(0.02));
  CHECK(e3.e(2, 2) == doctest::Approx(1.0));  // nothing leaves the leaked bin
  CHECK_THROWS_AS(error_matrix_2state(0.6), DomainError);
}

TEST_CASE("count correction inverts the error matrix") {
  ErrorMatrix e = error_matrix_2state(0.08);
  Eigen::VectorXd truth(2);
  truth << 700, 300;
  Eigen::VectorXd observed = e.e * truth;
  CorrectedCounts c = correct_counts(observed, e);
  CHECK(c.values[0] == doctest::Approx(700).epsilon(1e-9));
  CHECK(c.values[1] == doctest::Approx(300).epsilon(1e-9));
  CHECK(!c.clipped_flag);
}

TEST_CASE("count correction clips unphysical output") {
  ErrorMatrix e = error_matrix_2state(0.2);
  Eigen::VectorXd observed(2);
  observed << 1000, 100;  // fewer excited counts than the error floor
  CorrectedCounts c = correct_counts(observed, e);
  CHECK(c.clipped_flag);
  CHECK(c.values.minCoeff() >= 0.0);
  CHECK(c.values.sum() == doctest::Approx(1100).epsilon(1e-9));
}

TEST_CASE("two-cluster gaussian fit round trip") {
  std::vector<Shot> centers = {{-1.0, 0.3}, {1.4, 0.3}};
  std::vector<double> w = {0.65, 0.35};
  std::vector<Shot> shots = generate_gaussian_shots(centers, w, 0.35, 40000, 7);
  GaussianFit fit = fit_readout_gaussians(shots, 2);
  REQUIRE(fit.centers.size() == 2);
  CHECK(!fit.degenerate_flag);
  CHECK(fit.sigma == doctest::Approx(0.35).epsilon(0.03));
  // separation is rotation invariant
  double dx = fit.centers[1].i - fit.centers[0].i;
  double dy = fit.centers[1].q - fit.centers[0].q;
  CHECK(std::hypot(dx, dy) == doctest::Approx(2.4).epsilon(0.02));
  CHECK(std::min(fit.weights[0], fit.weights[1]) ==
        doctest::Approx(0.35).epsilon(0.05));
}

TEST_CASE("rotated input is handled by the principal-axis alignment") {
  // same clusters, but the IQ plane is rotated by 37 degrees
  double th = 37.0 * M_PI / 180.0;
  std::vector<Shot> centers = {
      {-1.2 * std::cos(th), -1.2 * std::sin(th)},
      {1.2 * std::cos(th), 1.2 * std::sin(th)}};
  std::vector<Shot> shots =
      generate_gaussian_shots(centers, {0.5, 0.5}, 0.3, 30000, 11);
  GaussianFit fit = fit_readout_gaussians(shots, 2);
  double dx = fit.centers[1].i - fit.centers[0].i;
  double dy = fit.centers[1].q - fit.centers[0].q;
  CHECK(std::hypot(dx, dy) == doctest::Approx(2.4).epsilon(0.02));
  // the rotation puts the pair along I
  CHECK(std::abs(dy) < 0.05 * std::abs(dx));
}

TEST_CASE("overlapping clusters raise the degenerate flag") {
  std::vector<Shot> centers = {{0.0, 0.0}, {0.02, 0.0}};
  std::vector<Shot> shots =
      generate_gaussian_shots(centers, {0.5, 0.5}, 0.5, 20000, 3);
  GaussianFit fit = fit_readout_gaussians(shots, 2);
  CHECK(fit.degenerate_flag);
}

TEST_CASE("minimum shot count is enforced") {
  std::vector<Shot> shots =
      generate_gaussian_shots({{0, 0}, {2, 0}}, {0.5, 0.5}, 0.3, 500, 1);
  CHECK_THROWS_AS(fit_readout_gaussians(shots, 2), DomainError);
}

TEST_CASE("bootstrap on deterministic labels") {
  std::vector<std::pair<int, int>> pairs(5000, {0, 0});
  ErrorMatrix id = error_matrix_2state(0.0);
  TransitionStats st = bootstrap_probabilities(pairs, 2, 50, 2000, id, id);
  CHECK(st.mean(0, 0) == doctest::Approx(1.0));
  CHECK(st.mean(1, 0) == doctest::Approx(0.0));
  CHECK(st.sd(0, 0) < 1e-12);
}

TEST_CASE("bootstrap recovers a known transition probability") {
  // ideal readout, true flip probability 0.3
  Eigen::VectorXd p0(2);
  p0 << 1.0, 0.0;
  Eigen::MatrixXd t(2, 2);
  t << 0.7, 0.3, 0.3, 0.7;  // rows final, cols initial
  ErrorMatrix id = error_matrix_2state(0.0);
  auto pairs = generate_synthetic_labels(p0, t, id, id, 20000, 99);
  TransitionStats st = bootstrap_probabilities(pairs, 2, 200, 5000, id, id);
  CHECK(st.mean(1, 0) == doctest::Approx(0.3).epsilon(0.05));
  // bootstrap spread matches the binomial expectation at the sample size
  double binom = std::sqrt(0.3 * 0.7 / 5000.0);
  CHECK(st.sd(1, 0) == doctest::Approx(binom).epsilon(0.5));
}

TEST_CASE("bootstrap undoes known assignment errors") {
  Eigen::VectorXd p0(2);
  p0 << 1.0, 0.0;
  Eigen::MatrixXd t(2, 2);
  t << 0.9, 0.1, 0.1, 0.9;
  ErrorMatrix noisy = error_matrix_2state(0.07);
  auto pairs = generate_synthetic_labels(p0, t, noisy, noisy, 60000, 42);
  TransitionStats corrected =
      bootstrap_probabilities(pairs, 2, 200, 20000, noisy, noisy);
  ErrorMatrix id = error_matrix_2state(0.0);
  TransitionStats raw = bootstrap_probabilities(pairs, 2, 200, 20000, id, id);
  // the uncorrected estimate is biased toward 0.5; correction removes it
  CHECK(std::abs(raw.mean(1, 0) - 0.1) > 0.02);
  CHECK(corrected.mean(1, 0) == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("bootstrap is reproducible for a fixed seed") {
  Eigen::VectorXd p0(2);
  p0 << 0.5, 0.5;
  Eigen::MatrixXd t(2, 2);
  t << 0.8, 0.2, 0.2, 0.8;
  ErrorMatrix id = error_matrix_2state(0.0);
  auto pairs = generate_synthetic_labels(p0, t, id, id, 5000, 5);
  TransitionStats a = bootstrap_probabilities(pairs, 2, 30, 1000, id, id, 77);
  TransitionStats b = bootstrap_probabilities(pairs, 2, 30, 1000, id, id, 77);
  CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.sd - b.sd).cwiseAbs().maxCoeff() == 0.0);
}
