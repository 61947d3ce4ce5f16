// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Each criterion pins its tolerance and its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qclock/constants.hpp"
#include "qclock/fringe.hpp"
#include "qclock/lindblad.hpp"
#include "qclock/linalg.hpp"
#include "qclock/parallel.hpp"
#include "qclock/ramsey.hpp"
#include "qclock/rng.hpp"

using namespace qclock;

namespace {

constexpr double kPi = constants::pi;

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int criterion, bool pass, const std::string& detail,
            double elapsed_s, double budget_s) {
  const bool in_budget = elapsed_s < budget_s;
  if (!pass || !in_budget) ++failures;
  std::printf("[%s] criterion %d: %s (%.2f s, budget %.0f s)\n",
              (pass && in_budget) ? "PASS" : "FAIL", criterion, detail.c_str(),
              elapsed_s, budget_s);
  std::fflush(stdout);
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * double(i) / double(points - 1);
  return g;
}

StableBasisModel random_model(SplitMix64& rng, std::size_t d,
                              std::size_t n_jumps) {
  std::vector<double> energies(d);
  for (auto& e : energies) e = rng.next_uniform(-1.0, 1.0);
  std::vector<std::vector<Complex>> ells(n_jumps, std::vector<Complex>(d));
  for (auto& row : ells)
    for (auto& l : row)
      l = Complex(rng.next_uniform(-1.0, 1.0), rng.next_uniform(-1.0, 1.0));
  return StableBasisModel(std::move(energies), std::move(ells));
}

DensityMatrix random_density(SplitMix64& rng, std::size_t d) {
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(i, j) = Complex(rng.next_uniform(-1.0, 1.0), rng.next_uniform(-1.0, 1.0));
  return DensityMatrix(m * m.adjoint());
}

// 1. Golden fringe-shape numbers at Gamma T = 1.
void criterion_golden_shape() {
  Timer timer;
  const FringeParams params{1.0, 0.0, kPi / 2.0};
  const FringeScan scan =
      scan_fringe(params, 1.0, uniform_grid(-2.0 * kPi, 2.0 * kPi, 2001));
  const ShapeMetrics m = shape_metrics(scan, 1.0);
  const bool pass = std::abs(m.min_max_ratio - 0.462) <= 0.005 &&
                    std::abs(m.slope_point_ratio - 0.731) <= 0.005;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "shape ratios at Gamma*T=1: min/max %.4f (want 0.462+-0.005), "
                "slope point %.4f (want 0.731+-0.005)",
                m.min_max_ratio, m.slope_point_ratio);
  report(1, pass, buf, timer.seconds(), 1.0);
}

// 2. Analytic stable-basis propagation == superoperator exponential.
void criterion_analytic_vs_superoperator() {
  Timer timer;
  SplitMix64 rng(1001);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const StableBasisModel model = random_model(rng, d, 1 + rep % 3);
    const DensityMatrix rho = random_density(rng, d);
    const CoherenceDecayMatrix decay = coherence_decay_matrix(model);
    double lam = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        lam = std::max(lam, std::abs(decay.lambda()(i, j)));
    lam = std::max(lam, 1e-3);
    const LindbladGenerator gen = model.to_generator();
    for (double f : {0.1, 1.0, 10.0}) {
      const double t = f / lam;
      const double err = (analytic_propagate(model, rho, t).matrix() -
                          propagate(gen, rho, t).matrix())
                             .max_norm();
      worst = std::max(worst, err);
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "analytic vs superoperator propagation, 50 models x 3 times: "
                "max error %.2e (tol 1e-8)",
                worst);
  report(2, worst <= 1e-8, buf, timer.seconds(), 10.0);
}

// 3. Composed pulse sequence == closed-form fringe.
void criterion_sequence_vs_closed_form() {
  Timer timer;
  SplitMix64 rng(1002);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const double scale = rng.next_uniform(0.2, 1.4);
    StableBasisModel model({0.0, rng.next_uniform(0.5, 3.0)},
                           {{Complex(rng.next_uniform(-scale, scale),
                                     rng.next_uniform(-scale, scale)),
                             Complex(rng.next_uniform(-scale, scale),
                                     rng.next_uniform(-scale, scale))}});
    const double t = rng.next_uniform(0.5, 2.0);
    const double area = rng.next_uniform(0.1, kPi);
    const double dw = rng.next_uniform(-kPi / t, kPi / t);
    RamseyConfig cfg;
    cfg.tau = 1e-13;
    cfg.free_time = t;
    cfg.omega_rabi = area / cfg.tau;
    cfg.delta_omega = dw;
    const FringeParams params = gamma_params_from_model(model, 0, 1, area);
    const double err = std::abs(ramsey_sequence(model, {0, 1}, cfg).pe -
                                analytic_pe(params, dw, t));
    worst = std::max(worst, err);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "sequence vs closed form, 200 random tuples: max |dPe| %.2e "
                "(tol 1e-10)",
                worst);
  report(3, worst <= 1e-10, buf, timer.seconds(), 5.0);
}

// 4. Rotating-wave validation against the fully oscillating drive.
void criterion_rwa() {
  Timer timer;
  const double rabi = 1.0;
  const double tau = kPi / 2.0 / rabi;  // pi/2 pulse area

  // (a) At resonance the oscillating-drive sequence must land on the
  // closed form within 5e-3 at omega/Omega = 1e3.
  double resonance_err = 0.0;
  {
    const double omega = 1e3 * rabi;
    const double dark = 1.0;
    const double t_tot = 2.0 * tau + dark;
    double theta = std::pow(120.0 * 2e-6 / (omega * t_tot), 0.25);
    theta = std::min(theta, 2.0 * kPi / 45.0);
    const long long steps = (long long)std::ceil(omega * t_tot / theta);
    const StableBasisModel model({0.0, omega}, {});
    const DriveSpec drive{omega, rabi / 2.0, false};
    const std::vector<ScheduleSegment> sched{{tau, true}, {dark, false},
                                             {tau, true}};
    const double pe = exact_driven_pe(model, {0, 1}, drive, sched, steps);
    const double ideal = analytic_pe({0.0, 0.0, rabi * tau}, 0.0, dark);
    resonance_err = std::abs(pe - ideal);
  }

  // (b) Error scaling: at the fringe peak the Pe difference is second
  // order by extremality, so the slope is probed at the quadrature
  // point, against the co-rotating dynamics integrated with the same
  // stepper. The difference isolates the counter-rotating term.
  const double dark = 2.0 * kPi;
  const double dw = 0.5 * kPi / (tau + dark);
  const std::vector<double> ratios{1e2, 1e3, 1e4};
  std::vector<double> errs(ratios.size(), 0.0);
  par::parallel_for(ratios.size(), [&](std::size_t i) {
    const double omega = ratios[i] * rabi;
    const double t_tot = 2.0 * tau + dark;
    double theta = std::pow(120.0 * 2e-6 / (omega * t_tot), 0.25);
    theta = std::min(theta, 2.0 * kPi / 45.0);
    const long long steps = (long long)std::ceil(omega * t_tot / theta);
    const StableBasisModel model({0.0, omega - dw}, {});
    const std::vector<ScheduleSegment> sched{{tau, true}, {dark, false},
                                             {tau, true}};
    const double pe_full = exact_driven_pe(
        model, {0, 1}, DriveSpec{omega, rabi / 2.0, false}, sched, steps);
    const double pe_rwa = exact_driven_pe(
        model, {0, 1}, DriveSpec{omega, rabi / 2.0, true}, sched, steps);
    errs[i] = std::abs(pe_full - pe_rwa);
  });

  // Least-squares slope of log err against log(Omega/omega).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double x = std::log(1.0 / ratios[i]);
    const double y = std::log(std::max(errs[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(ratios.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  const bool pass = resonance_err <= 5e-3 && std::abs(slope - 1.0) <= 0.3;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "RWA: resonance |dPe| %.2e at w/W=1e3 (tol 5e-3); "
                "counter-rotating errors {%.2e, %.2e, %.2e}, log-log slope "
                "%.3f (want 1.0+-0.3)",
                resonance_err, errs[0], errs[1], errs[2], slope);
  report(4, pass, buf, timer.seconds(), 120.0);
}

// 5. Entropy theorem: monotone under the condition, violated without it.
void criterion_entropy() {
  Timer timer;
  SplitMix64 rng(1005);
  double worst_drop = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const StableBasisModel model = random_model(rng, d, 1 + rep % 3);
    const LindbladGenerator gen = model.to_generator();
    if (!entropy_condition_check(gen).holds) {
      report(5, false, "diagonal generator failed the entropy condition",
             timer.seconds(), 30.0);
      return;
    }
    const DensityMatrix rho = random_density(rng, d);
    double prev = von_neumann_entropy(rho);
    for (double t : {0.1, 0.3, 0.7, 1.5, 3.0, 6.0}) {
      const double s = von_neumann_entropy(propagate(gen, rho, t));
      worst_drop = std::max(worst_drop, prev - s);
      prev = s;
    }
  }

  ComplexMatrix raising(2);
  raising(0, 1) = 1.0;
  const LindbladGenerator counterexample(ComplexMatrix::zero(2), {raising});
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const double drop = von_neumann_entropy(mixed) -
                      von_neumann_entropy(propagate(counterexample, mixed, 1.0));

  const bool pass = worst_drop <= 1e-9 && drop > 1e-3 &&
                    !entropy_condition_check(counterexample).holds;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "entropy: worst decrease %.2e over 50 diagonal generators "
                "(tol 1e-9); raising-operator decrease %.4f from the mixed "
                "state (want > 1e-3)",
                worst_drop, drop);
  report(5, pass, buf, timer.seconds(), 30.0);
}

// 6. Stability certificates reproduce the coherence decay rates.
void criterion_stability() {
  Timer timer;
  SplitMix64 rng(1006);
  double worst = 0.0;
  bool all_stable = true;
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const std::size_t n_jumps = 1 + rep % 3;
    const StableBasisModel model = random_model(rng, d, n_jumps);
    const LindbladGenerator gen = model.to_generator();

    std::vector<double> energies(d);
    std::vector<std::vector<Complex>> ells(n_jumps, std::vector<Complex>(d));
    for (std::size_t m = 0; m < d; ++m) {
      const StabilityReport rep_m = stability_check(gen, m);
      all_stable = all_stable && rep_m.stable && rep_m.rhs_norm <= 1e-10;
      if (!rep_m.stable) continue;
      energies[m] = rep_m.energy;
      for (std::size_t a = 0; a < n_jumps; ++a)
        ells[a][m] = rep_m.jump_eigenvalues[a];
    }
    const StableBasisModel extracted(energies, ells);
    const ComplexMatrix lam_extracted =
        coherence_decay_matrix(extracted).lambda();
    const ComplexMatrix lam_direct = coherence_decay_matrix(model).lambda();
    worst = std::max(worst, (lam_extracted - lam_direct).max_norm());
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "stability: every basis state certified %s; extracted rates "
                "match the decay matrix to %.2e (tol 1e-12)",
                all_stable ? "yes" : "NO", worst);
  report(6, all_stable && worst <= 1e-12, buf, timer.seconds(), 5.0);
}

// 7. Estimator round trip, noiseless and under Gaussian noise.
void criterion_estimation() {
  Timer timer;
  SplitMix64 rng(1007);
  const double t = 1.0;

  double worst_rel = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    FringeParams truth;
    truth.gamma = rng.next_uniform(0.05, 3.0);
    truth.eshift = rng.next_uniform(-1.0, 1.0);
    truth.omega_rabi_tau = kPi / 2.0;
    const FringeScan scan =
        scan_fringe(truth, t, uniform_grid(-2.0 * kPi, 2.0 * kPi, 401));
    const FitResult fit = fit_fringe(scan, t);
    if (!fit.converged) {
      report(7, false, "noiseless fit failed to converge", timer.seconds(),
             60.0);
      return;
    }
    worst_rel = std::max(worst_rel,
                         std::abs(fit.gamma - truth.gamma) /
                             std::max(truth.gamma, 1e-6));
    worst_rel = std::max(worst_rel, std::abs(fit.eshift - truth.eshift) /
                                        std::max(std::abs(truth.eshift), 1.0));
  }

  const FringeParams truth{1.0, 0.0, kPi / 2.0};
  const std::vector<FitResult> fits = fit_trials(
      truth, t, uniform_grid(-2.0 * kPi, 2.0 * kPi, 200), 0.01, 90210, 100);
  std::vector<double> rel;
  rel.reserve(fits.size());
  for (const FitResult& f : fits)
    rel.push_back(std::abs(f.gamma - truth.gamma) / truth.gamma);
  std::sort(rel.begin(), rel.end());
  const double median = rel[rel.size() / 2];

  const bool pass = worst_rel <= 1e-8 && median <= 0.05;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "estimation: noiseless recovery %.2e relative (tol 1e-8); "
                "noisy median |dGamma|/Gamma %.4f over 100 trials (tol 0.05)",
                worst_rel, median);
  report(7, pass, buf, timer.seconds(), 60.0);
}

// 8. Bound arithmetic in eV.
void criterion_bounds() {
  Timer timer;
  const double yb = gamma_bound_ev(600.0);
  const double pointer = pointer_level_spacing_ev(1e-3, 1e-2, 0);
  const double optical = fractional_imprecision(1.0, 0.66);
  const double aluminum = fractional_imprecision(3.0, 4.64);
  const bool pass = yb >= 1.0e-18 && yb <= 1.2e-18 &&
                    pointer >= 1e-43 && pointer <= 1e-41 &&
                    optical >= 1e-16 && optical <= 1e-14 &&
                    aluminum >= 3e-18 && aluminum <= 3e-16;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "bounds: hbar/600s = %.3e eV (want [1.0e-18, 1.2e-18]); "
                "pointer spacing %.2e eV (want 1e-42 within x10); fractional "
                "imprecision %.1e (1e-15 order) and %.1e (3e-17 order)",
                yb, pointer, optical, aluminum);
  report(8, pass, buf, timer.seconds(), 1.0);
}

// 9. Three-level closure: energies cancel, shifts need not.
void criterion_closure() {
  Timer timer;
  const StableBasisModel fixture(
      {0.0, 1.0, 2.0},
      {{Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(0.0, 0.0)}});
  const ClosureReport rep = three_level_closure(fixture, 0, 1, 2);

  SplitMix64 rng(1009);
  bool energies_closed = true;
  for (int i = 0; i < 20; ++i) {
    const StableBasisModel model = random_model(rng, 3, 2);
    energies_closed = energies_closed &&
                      three_level_closure(model, 0, 1, 2).energy_closure == 0.0;
  }
  const bool pass = energies_closed && rep.energy_closure == 0.0 &&
                    std::abs(rep.closure_sum - 1.0) <= 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "closure: energy closure identically 0; fixture shift sum "
                "%.12f (want 1 +- 1e-12)",
                rep.closure_sum);
  report(9, pass, buf, timer.seconds(), 1.0);
}

}  // namespace

int main() {
  criterion_golden_shape();
  criterion_analytic_vs_superoperator();
  criterion_sequence_vs_closed_form();
  criterion_rwa();
  criterion_entropy();
  criterion_stability();
  criterion_estimation();
  criterion_bounds();
  criterion_closure();
  std::printf(
      "[INFO] criterion 10: published clock bounds enter as arithmetic only "
      "(criterion 8); no hardware data is reproduced here.\n");
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
