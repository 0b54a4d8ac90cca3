#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fluxsim/calibration.hpp"

using namespace fluxsim;

namespace {

DeviceParams device_a() {
  DeviceParams d;
  d.fluxonium = {2.68, 1.09, 0.32, 0.5};
  d.g = 0.203;
  d.omega_r = 7.440;
  d.kappa = 0.0006;
  return d;
}

HilbertSpec spec_of(int nq, int nf) {
  HilbertSpec s;
  s.n_flux = nq;
  s.n_fock = nf;
  s.n_sidebands = 1;
  return s;
}

}  // namespace

TEST_CASE("Kerr coefficient vanishes when the coupling is switched off") {
  DeviceParams d = device_a();
  d.g = 1e-8;
  CHECK(std::abs(kerr_coefficient(d, spec_of(5, 8), +1)) < 1e-10);
  CHECK(std::abs(kerr_coefficient(d, spec_of(5, 8), -1)) < 1e-10);
}

TEST_CASE("Kerr coefficients for the two qubit states differ") {
  DeviceParams d = device_a();
  HilbertSpec s = spec_of(6, 12);
  double ke = kerr_coefficient(d, s, +1);
  double kg = kerr_coefficient(d, s, -1);
  CHECK(std::abs(ke - kg) > 0.1 * std::abs(ke));
  CHECK(std::abs(ke) < 1e-3);  // sub-MHz for a dispersive readout
  CHECK(std::abs(kg) < 1e-3);
  CHECK_THROWS_AS(kerr_coefficient(d, s, 0), DomainError);
}

TEST_CASE("photon number is linear in power without Kerr") {
  DeviceParams d = device_a();
  double chi = 0.000845;
  double n1 = photons_from_power(1e-15, 2e-8, d, 0.0, chi, 0.0, +1);
  double n2 = photons_from_power(2e-15, 2e-8, d, 0.0, chi, 0.0, +1);
  CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-9));
  CHECK(photons_from_power(0.0, 2e-8, d, 0.0, chi, 0.0, +1) == 0.0);
}

TEST_CASE("photon number without Kerr matches the closed form") {
  DeviceParams d = device_a();
  double alpha = 1e-8, p = 5e-15, delta = 0.001, chi = 0.000845;
  double n = photons_from_power(p, alpha, d, delta, chi, 0.0, +1);
  double hk = kTwoPi * (d.kappa / 2) * kGHzToHz;
  double det = kTwoPi * (delta + chi) * kGHzToHz;
  double expect = alpha * hk * p /
                  (kPlanckJs * (d.omega_r + delta) * kGHzToHz *
                   (hk * hk + det * det));
  CHECK(n == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("Kerr self-consistency agrees with independent bisection") {
  DeviceParams d = device_a();
  double alpha = 1e-6, p = 2e-9, delta = 0.0005, chi = 0.000845;
  double kerr = 2e-5;  // positive: detuning grows with n, unique fixed point
  double n = photons_from_power(p, alpha, d, delta, chi, kerr, +1);
  // solve the same balance by bisection on f(x) = response(x) - x
  auto response = [&](double x) {
    double hk = kTwoPi * (d.kappa / 2) * kGHzToHz;
    double det = kTwoPi * (delta + chi + kerr * x) * kGHzToHz;
    return alpha * hk * p /
           (kPlanckJs * (d.omega_r + delta) * kGHzToHz *
            (hk * hk + det * det));
  };
  double lo = 0, hi = 1e4;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    (response(mid) - mid > 0 ? lo : hi) = mid;
  }
  CHECK(n == doctest::Approx(lo).epsilon(1e-9));
  // the Kerr term pushes the drive away from resonance here
  double n0 = photons_from_power(p, alpha, d, delta, chi, 0.0, +1);
  CHECK(n < 0.99 * n0);
}

TEST_CASE("attenuation fit recovers a synthetic line attenuation") {
  DeviceParams d = device_a();
  double chi = 0.000845;
  double alpha_true = 3.2e-8;
  double cp = stark_response_constant(d, 0.0, chi, +1);
  double cm = stark_response_constant(d, 0.0, chi, -1);
  StarkDataset data;
  data.device = d;
  data.delta_ghz = 0.0;
  double f0 = 0.4015;
  for (int i = 1; i <= 8; ++i) {
    double p = i * 2e-15;
    data.records.push_back({p, f0 + 2.0 * chi * alpha_true * (cp + cm) * p});
  }
  AttenuationFit fit = fit_attenuation_scale(data, chi, spec_of(5, 8));
  CHECK(fit.alpha == doctest::Approx(alpha_true).epsilon(1e-6));
  CHECK(fit.residual_rms < 1e-12);
  CHECK(!fit.zero_slope_flag);
  CHECK(fit.alpha_db == doctest::Approx(10.0 * std::log10(alpha_true)));
}

TEST_CASE("flat stark data raises the zero-slope flag") {
  DeviceParams d = device_a();
  StarkDataset data;
  data.device = d;
  data.delta_ghz = 0.0;
  // pure noise, no trend
  double noise[6] = {1e-6, -2e-6, 1.5e-6, -0.5e-6, 0.8e-6, -1.2e-6};
  for (int i = 0; i < 6; ++i)
    data.records.push_back({(i + 1) * 1e-15, 0.4015 + noise[i]});
  AttenuationFit fit = fit_attenuation_scale(data, 0.000845, spec_of(5, 8));
  CHECK(fit.zero_slope_flag);
}

TEST_CASE("calibration input validation") {
  DeviceParams d = device_a();
  CHECK_THROWS_AS(photons_from_power(1e-15, 0.0, d, 0, 1e-3, 0, +1),
                  DomainError);
  CHECK_THROWS_AS(photons_from_power(-1e-15, 1e-8, d, 0, 1e-3, 0, +1),
                  DomainError);
  StarkDataset data;
  data.device = d;
  data.records = {{1e-15, 0.4}, {2e-15, 0.4}};
  CHECK_THROWS_AS(fit_attenuation_scale(data, 1e-3, spec_of(5, 8)),
                  DomainError);
}
