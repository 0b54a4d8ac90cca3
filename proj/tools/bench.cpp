// Benchmark: the reduced-basis Floquet steady-state path against the direct
// serial Lindblad integrator on a driven damped cavity, plus sweep scaling
// with thread count.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "fluxsim/floquet.hpp"
#include "fluxsim/reference.hpp"

using namespace fluxsim;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

DeviceParams small_device() {
  DeviceParams dev;
  dev.fluxonium = {2.68, 1.09, 0.32, 0.45};
  dev.g = 0.05;
  dev.omega_r = 7.44;
  dev.kappa = 0.02;
  return dev;
}

}  // namespace

int main() {
  // driven cavity: floquet pipeline vs direct integrator vs closed form
  {
    double omega_r = 7.44, kappa = 0.01, eps = 0.004;
    double omega_d = omega_r + 0.002;

    double t0 = now_seconds();
    double n_direct = driven_cavity_steady_n(omega_r, kappa, eps, omega_d, 20);
    double t_direct = now_seconds() - t0;

    DeviceParams dev = small_device();
    dev.omega_r = omega_r;
    dev.kappa = kappa;
    dev.g = 1e-7;  // decoupled within solver tolerance
    HilbertSpec spec;
    spec.n_flux = 2;
    spec.n_fock = 20;
    spec.n_sidebands = 3;
    SolverOptions opts;
    opts.k_kept = 60;
    opts.dressed_frame = false;

    t0 = now_seconds();
    FloquetModel model =
        build_floquet_model(dev, {eps, omega_d}, std::nullopt, spec, 0, opts);
    EvolveResult r = run_steady_state(model, opts);
    double t_floquet = now_seconds() - t0;

    double lorentz = driven_cavity_lorentzian(omega_r, kappa, eps, omega_d);
    std::printf("driven cavity steady n:\n");
    std::printf("  closed form        %.6f\n", lorentz);
    std::printf("  direct integrator  %.6f   (%.2f s)\n", n_direct, t_direct);
    std::printf("  floquet pipeline   %.6f   (%.2f s)\n", r.n_bar, t_floquet);
  }

  // sweep scaling
  {
    DeviceParams dev = small_device();
    HilbertSpec spec;
    spec.n_flux = 3;
    spec.n_fock = 12;
    spec.n_sidebands = 3;
    SolverOptions opts;
    opts.k_kept = 60;
    std::vector<double> grid = {0.001, 0.002, 0.003, 0.004};

    for (int threads : {1, omp_get_max_threads()}) {
      double t0 = now_seconds();
      auto curves = sweep_qnd_curves(dev, std::nullopt, spec, grid, {"g"},
                                     opts, 0, threads);
      double dt = now_seconds() - t0;
      std::printf("sweep of %zu points, %d thread(s): %.2f s\n", grid.size(),
                  threads, dt);
      (void)curves;
    }
  }
  return 0;
}
