// Benchmark of the parallel kernels against their serial reference
// implementations. The parallel paths must produce bit-identical output,
// so the comparison is also asserted here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "qclock/constants.hpp"
#include "qclock/fringe.hpp"
#include "qclock/parallel.hpp"

using namespace qclock;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * double(i) / double(points - 1);
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  const int points = argc > 1 ? std::atoi(argv[1]) : 4001;
  const int trials = argc > 2 ? std::atoi(argv[2]) : 64;
  const double kPi = constants::pi;

  std::printf("workers: %d\n", par::worker_count());

  // Model-source fringe scan: one full pulse sequence per grid point.
  const StableBasisModel model({0.0, 1.0e9},
                               {{Complex(0.55, 0.2), Complex(-0.35, -0.4)}});
  RamseyConfig cfg;
  cfg.tau = 1e-6;
  cfg.free_time = 1.0;
  cfg.omega_rabi = 0.5 * kPi / cfg.tau;
  const std::vector<double> grid = uniform_grid(-2.0 * kPi, 2.0 * kPi, points);

  double t0 = now_ms();
  const FringeScan serial = scan_fringe_serial(model, {0, 1}, cfg, grid);
  const double scan_serial_ms = now_ms() - t0;
  t0 = now_ms();
  const FringeScan parallel = scan_fringe(model, {0, 1}, cfg, grid);
  const double scan_parallel_ms = now_ms() - t0;
  bool identical = true;
  for (std::size_t i = 0; i < serial.pe.size(); ++i)
    identical = identical && serial.pe[i] == parallel.pe[i];
  std::printf("scan %6d points   serial %8.1f ms   parallel %8.1f ms   "
              "speedup %.2fx   identical %s\n",
              points, scan_serial_ms, scan_parallel_ms,
              scan_serial_ms / scan_parallel_ms, identical ? "yes" : "NO");

  // Monte Carlo estimator trials: scan + fit per seed.
  const FringeParams truth{1.0, 0.1, kPi / 2.0};
  const std::vector<double> fit_grid = uniform_grid(-2.0 * kPi, 2.0 * kPi, 200);
  t0 = now_ms();
  const auto fits_serial =
      fit_trials_serial(truth, 1.0, fit_grid, 0.01, 777, trials);
  const double fit_serial_ms = now_ms() - t0;
  t0 = now_ms();
  const auto fits_parallel = fit_trials(truth, 1.0, fit_grid, 0.01, 777, trials);
  const double fit_parallel_ms = now_ms() - t0;
  bool fits_identical = true;
  for (int i = 0; i < trials; ++i)
    fits_identical = fits_identical &&
                     fits_serial[i].gamma == fits_parallel[i].gamma &&
                     fits_serial[i].eshift == fits_parallel[i].eshift;
  std::printf("fit  %6d trials   serial %8.1f ms   parallel %8.1f ms   "
              "speedup %.2fx   identical %s\n",
              trials, fit_serial_ms, fit_parallel_ms,
              fit_serial_ms / fit_parallel_ms, fits_identical ? "yes" : "NO");

  return (identical && fits_identical) ? 0 : 1;
}
