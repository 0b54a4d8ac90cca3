#include "fluxsim/calibration.hpp"

#include <cmath>

namespace fluxsim {

double kerr_coefficient(const DeviceParams& dev, const HilbertSpec& spec,
                        int qubit_state_sign, int basis_size) {
  if (qubit_state_sign != 1 && qubit_state_sign != -1)
    throw DomainError("qubit_state_sign must be +1 or -1");
  HilbertSpec s = spec;
  s.tls_present = false;
  if (s.n_fock < 4) s.n_fock = 4;
  Matrix h = build_static_hamiltonian(dev, s, basis_size);
  DressedSystem d = dress(h, s);
  int q = qubit_state_sign > 0 ? 1 : 0;
  double e0 = d.energy(q, 0);
  double e1 = d.energy(q, 1);
  double e2 = d.energy(q, 2);
  return (e2 - e1) - (e1 - e0);
}

namespace {

double photon_response(double n, double p_rf_watts, double alpha,
                       const DeviceParams& dev, double delta_ghz,
                       double chi_ghz, double kerr_ghz, int sign) {
  double half_kappa = dev.kappa / 2.0;
  double omega_rf_hz = (dev.omega_r + delta_ghz) * kGHzToHz;
  double hbar_omega = kPlanckJs * omega_rf_hz;  // photon energy, J
  double det = delta_ghz + sign * chi_ghz + kerr_ghz * n;
  // rates in angular rad/s so that the watts -> photons/s balance is SI
  double hk_ang = kTwoPi * half_kappa * kGHzToHz;
  double det_ang = kTwoPi * det * kGHzToHz;
  return alpha * hk_ang * p_rf_watts /
         (hbar_omega * (hk_ang * hk_ang + det_ang * det_ang));
}

}  // namespace

double photons_from_power(double p_rf_watts, double alpha,
                          const DeviceParams& dev, double delta_ghz,
                          double chi_ghz, double kerr_ghz, int sign) {
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (p_rf_watts < 0) throw DomainError("power must be nonnegative");
  dev.validate();

  // damped fixed-point iteration
  double n = photon_response(0, p_rf_watts, alpha, dev, delta_ghz, chi_ghz,
                             kerr_ghz, sign);
  const double damping = 0.5;
  for (int it = 0; it < 50; ++it) {
    double next = photon_response(n, p_rf_watts, alpha, dev, delta_ghz,
                                  chi_ghz, kerr_ghz, sign);
    double updated = (1 - damping) * n + damping * next;
    if (std::abs(updated - n) < 1e-12 * std::max(1.0, n)) return updated;
    n = updated;
  }

  // fallback: bracketed bisection on f(n) = response(n) - n
  double lo = 0;
  double hi = std::max(
      1.0, 4.0 * photon_response(0, p_rf_watts, alpha, dev, delta_ghz,
                                 chi_ghz, kerr_ghz, sign));
  auto f = [&](double x) {
    return photon_response(x, p_rf_watts, alpha, dev, delta_ghz, chi_ghz,
                           kerr_ghz, sign) - x;
  };
  if (f(lo) < 0) throw ConvergenceError("photons_from_power: no bracket");
  int guard = 0;
  while (f(hi) > 0) {
    hi *= 2;
    if (++guard > 60)
      throw ConvergenceError(
          "photons_from_power: fixed point not bracketed (bistable regime?)");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = (lo + hi) / 2;
    if (f(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

double stark_response_constant(const DeviceParams& dev, double delta_ghz,
                               double chi_ghz, int sign) {
  return photon_response(0, 1.0, 1.0, dev, delta_ghz, chi_ghz, 0.0, sign);
}

AttenuationFit fit_attenuation_scale(const StarkDataset& data, double chi_ghz,
                                     const HilbertSpec& spec, int basis_size) {
  (void)spec;
  (void)basis_size;
  if (data.records.size() < 3)
    throw DomainError("attenuation fit needs at least 3 points");
  for (const StarkRecord& r : data.records)
    if (!(r.p_rf_watts > 0) || !std::isfinite(r.f_q_ghz))
      throw DomainError("invalid stark record");

  double c_plus = stark_response_constant(data.device, data.delta_ghz,
                                          chi_ghz, +1);
  double c_minus = stark_response_constant(data.device, data.delta_ghz,
                                           chi_ghz, -1);

  // least squares f_q = w0 + m P, with m = 2 chi alpha (C+ + C-)
  const size_t n = data.records.size();
  double sp = 0, sf = 0, spp = 0, spf = 0;
  for (const StarkRecord& r : data.records) {
    sp += r.p_rf_watts;
    sf += r.f_q_ghz;
    spp += r.p_rf_watts * r.p_rf_watts;
    spf += r.p_rf_watts * r.f_q_ghz;
  }
  double denom = n * spp - sp * sp;
  if (std::abs(denom) < 1e-300 * std::max(1.0, spp))
    throw DomainError("attenuation fit is rank deficient");
  double slope = (n * spf - sp * sf) / denom;
  double intercept = (sf - slope * sp) / n;

  AttenuationFit fit;
  fit.alpha = slope / (2.0 * chi_ghz * (c_plus + c_minus));
  double ss = 0;
  for (const StarkRecord& r : data.records) {
    double e = r.f_q_ghz - (intercept + slope * r.p_rf_watts);
    ss += e * e;
  }
  fit.residual_rms = std::sqrt(ss / n);
  double p_min = data.records.front().p_rf_watts;
  double p_max = p_min;
  for (const StarkRecord& r : data.records) {
    p_min = std::min(p_min, r.p_rf_watts);
    p_max = std::max(p_max, r.p_rf_watts);
  }
  double signal = std::abs(slope) * (p_max - p_min);
  fit.zero_slope_flag = signal < 2 * fit.residual_rms || slope == 0;
  if (slope == 0) fit.alpha = 0;
  fit.alpha_db = fit.alpha > 0 ? 10.0 * std::log10(fit.alpha) : 0.0;
  return fit;
}

}  // namespace fluxsim
