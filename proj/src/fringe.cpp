#include "qclock/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qclock/constants.hpp"
#include "qclock/parallel.hpp"
#include "qclock/rng.hpp"

namespace qclock {

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("scan: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("scan: grid must be strictly increasing");
}

double clip_unit(double x) { return std::min(std::max(x, 0.0), 1.0); }

double apply_noise(double value, const std::optional<NoiseSpec>& noise,
                   std::size_t index) {
  if (!noise || noise->sigma == 0.0) return clip_unit(value);
  SplitMix64 rng = SplitMix64::for_index(noise->seed, index);
  return clip_unit(value + noise->sigma * rng.next_gaussian());
}

/// Vertex of the parabola through (x0-h, ym), (x0, y0), (x0+h, yp) for a
/// uniform local spacing h; falls back to the sample when degenerate.
void quadratic_vertex(double x0, double h, double ym, double y0, double yp,
                      double& x_out, double& y_out) {
  const double denom = ym - 2.0 * y0 + yp;
  if (denom == 0.0) {
    x_out = x0;
    y_out = y0;
    return;
  }
  const double delta = 0.5 * (ym - yp) / denom;
  x_out = x0 + delta * h;
  y_out = y0 - 0.25 * (ym - yp) * delta;
}

/// Quadratic interpolation of the samples around index i at position x.
double interp_quadratic(const std::vector<double>& xs,
                        const std::vector<double>& ys, std::size_t i,
                        double x) {
  const std::size_t n = xs.size();
  const std::size_t c = std::min(std::max<std::size_t>(i, 1), n - 2);
  const double x0 = xs[c - 1], x1 = xs[c], x2 = xs[c + 1];
  const double y0 = ys[c - 1], y1 = ys[c], y2 = ys[c + 1];
  const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  return y0 * l0 + y1 * l1 + y2 * l2;
}

struct FringeModelEval {
  double value = 0.0;
  double d_amplitude = 0.0;
  double d_gamma = 0.0;
  double d_eshift = 0.0;
};

FringeModelEval eval_fringe_model(double amplitude, double gamma, double eshift,
                                  double omega, double t) {
  const double contrast = std::exp(-gamma * t);
  const double phase = (omega - eshift) * t;
  const double c = std::cos(phase);
  FringeModelEval e;
  e.d_amplitude = 1.0 + contrast * c;
  e.value = amplitude * e.d_amplitude;
  e.d_gamma = -amplitude * t * contrast * c;
  e.d_eshift = amplitude * t * contrast * std::sin(phase);
  return e;
}

double best_amplitude(const FringeScan& scan, double gamma, double eshift,
                      double t) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < scan.omegas.size(); ++i) {
    const double g = 1.0 + std::exp(-gamma * t) *
                               std::cos((scan.omegas[i] - eshift) * t);
    num += scan.pe[i] * g;
    den += g * g;
  }
  return den > 0.0 ? num / den : 0.0;
}

double residual_sum(const FringeScan& scan, double amplitude, double gamma,
                    double eshift, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < scan.omegas.size(); ++i) {
    const double m =
        eval_fringe_model(amplitude, gamma, eshift, scan.omegas[i], t).value;
    const double r = m - scan.pe[i];
    s += r * r;
  }
  return s;
}

// Solve the symmetric 3x3 system a x = b in place.
bool solve3(double a[3][3], double b[3], double x[3]) {
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[perm[r]][col]) > std::abs(a[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    const double d = a[perm[col]][col];
    if (d == 0.0 || !std::isfinite(d)) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[perm[r]][col] / d;
      a[perm[r]][col] = 0.0;
      for (int k = col + 1; k < 3; ++k) a[perm[r]][k] -= f * a[perm[col]][k];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double acc = b[perm[col]];
    for (int k = col + 1; k < 3; ++k) acc -= a[perm[col]][k] * x[k];
    x[col] = acc / a[perm[col]][col];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

}  // namespace

void FringeScan::validate() const {
  check_grid(omegas);
  if (pe.size() != omegas.size())
    throw std::invalid_argument("scan: omega/pe length mismatch");
  for (double v : pe)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("scan: pe outside [0, 1]");
}

FringeScan scan_fringe(const FringeParams& params, double ramsey_time,
                       const std::vector<double>& grid,
                       const std::optional<NoiseSpec>& noise) {
  check_grid(grid);
  FringeScan scan;
  scan.omegas = grid;
  scan.pe.resize(grid.size());
  scan.ramsey_time = ramsey_time;
  scan.measured = noise.has_value() && noise->sigma > 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    scan.pe[i] = apply_noise(analytic_pe(params, grid[i], ramsey_time), noise, i);
  return scan;
}

namespace {

FringeScan scan_model_impl(const StableBasisModel& model,
                           const ClockTransition& tr, const RamseyConfig& cfg,
                           const std::vector<double>& grid,
                           const std::optional<NoiseSpec>& noise,
                           bool parallel) {
  check_grid(grid);
  cfg.validate();
  FringeScan scan;
  scan.omegas = grid;
  scan.pe.resize(grid.size());
  scan.ramsey_time = cfg.free_time;
  scan.measured = noise.has_value() && noise->sigma > 0.0;

  const auto point = [&](std::size_t i) {
    RamseyConfig local = cfg;
    local.delta_omega = grid[i];
    scan.pe[i] = apply_noise(ramsey_sequence(model, tr, local).pe, noise, i);
  };
  if (parallel)
    par::parallel_for(grid.size(), point);
  else
    for (std::size_t i = 0; i < grid.size(); ++i) point(i);
  return scan;
}

}  // namespace

FringeScan scan_fringe(const StableBasisModel& model, const ClockTransition& tr,
                       const RamseyConfig& cfg, const std::vector<double>& grid,
                       const std::optional<NoiseSpec>& noise) {
  return scan_model_impl(model, tr, cfg, grid, noise, true);
}

FringeScan scan_fringe_serial(const StableBasisModel& model,
                              const ClockTransition& tr, const RamseyConfig& cfg,
                              const std::vector<double>& grid,
                              const std::optional<NoiseSpec>& noise) {
  return scan_model_impl(model, tr, cfg, grid, noise, false);
}

ShapeMetrics shape_metrics(const FringeScan& scan, double ramsey_time) {
  scan.validate();
  if (!(ramsey_time > 0.0))
    throw std::invalid_argument("shape_metrics: Ramsey time must be > 0");
  const std::size_t n = scan.omegas.size();
  const double period = 2.0 * constants::pi / ramsey_time;
  const double span = scan.omegas.back() - scan.omegas.front();
  if (span < period)
    throw std::invalid_argument(
        "shape_metrics: scan must cover at least one fringe period (" +
        std::to_string(period) + " rad/s)");
  const double step = span / double(n - 1);
  const double points_per_period = period / step;
  if (points_per_period < 25.0) {
    throw std::invalid_argument(
        "shape_metrics: grid too coarse, " +
        std::to_string(points_per_period) +
        " points per period; need >= 25 (step <= " +
        std::to_string(period / 25.0) + " rad/s)");
  }

  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (scan.pe[i] > scan.pe[imax]) imax = i;
    if (scan.pe[i] < scan.pe[imin]) imin = i;
  }
  // The fringe repeats every period, so a multi-period scan has equal
  // extrema; among ties prefer the one nearest the scan center.
  {
    const double center = 0.5 * (scan.omegas.front() + scan.omegas.back());
    const double tie = 1e-12 * std::max(1.0, scan.pe[imax]);
    for (std::size_t i = 0; i < n; ++i) {
      if (scan.pe[i] >= scan.pe[imax] - tie &&
          std::abs(scan.omegas[i] - center) <
              std::abs(scan.omegas[imax] - center))
        imax = i;
      if (scan.pe[i] <= scan.pe[imin] + tie &&
          std::abs(scan.omegas[i] - center) <
              std::abs(scan.omegas[imin] - center))
        imin = i;
    }
  }

  const auto vertex_at = [&](std::size_t i, double& x, double& y) {
    const std::size_t c = std::min(std::max<std::size_t>(i, 1), n - 2);
    quadratic_vertex(scan.omegas[c], step, scan.pe[c - 1], scan.pe[c],
                     scan.pe[c + 1], x, y);
  };

  ShapeMetrics m;
  double peak_p = 0.0, min_p = 0.0, min_w = 0.0;
  vertex_at(imax, m.peak_omega, peak_p);
  vertex_at(imin, min_w, min_p);
  min_p = std::max(min_p, 0.0);

  // Steepest slope from central differences, refined the same way.
  std::vector<double> slope_abs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    slope_abs[i] = std::abs((scan.pe[i + 1] - scan.pe[i - 1]) /
                            (scan.omegas[i + 1] - scan.omegas[i - 1]));
  std::size_t is = 1;
  for (std::size_t i = 2; i + 1 < n; ++i)
    if (slope_abs[i] > slope_abs[is]) is = i;
  double slope_w = 0.0, slope_v = 0.0;
  {
    const std::size_t c = std::min(std::max<std::size_t>(is, 2), n - 3);
    quadratic_vertex(scan.omegas[c], step, slope_abs[c - 1], slope_abs[c],
                     slope_abs[c + 1], slope_w, slope_v);
  }
  const double slope_pe = interp_quadratic(scan.omegas, scan.pe, is, slope_w);

  if (peak_p <= 0.0)
    throw std::invalid_argument("shape_metrics: flat scan, no peak");
  m.min_max_ratio = min_p / peak_p;
  m.slope_point_ratio = slope_pe / peak_p;
  m.contrast = (peak_p - min_p) / (peak_p + min_p);
  return m;
}

FitResult fit_fringe(const FringeScan& scan, double ramsey_time,
                     const std::optional<FitInit>& init) {
  scan.validate();
  if (!(ramsey_time > 0.0))
    throw std::invalid_argument("fit_fringe: Ramsey time must be > 0");
  const double t = ramsey_time;
  const std::size_t n = scan.omegas.size();
  if (n < 4)
    throw std::invalid_argument("fit_fringe: need at least 4 points");

  double amplitude, gamma, eshift;
  if (init) {
    amplitude = init->amplitude;
    gamma = std::max(init->gamma, 0.0);
    eshift = init->eshift;
  } else {
    // Coarse grid search; the amplitude is linear and solved exactly.
    const double gamma_max = 5.0 / t;
    const double period = 2.0 * constants::pi / t;
    double best = -1.0;
    amplitude = gamma = eshift = 0.0;
    for (int ig = 0; ig <= 25; ++ig) {
      const double g = gamma_max * double(ig) / 25.0;
      for (int ie = 0; ie < 64; ++ie) {
        const double e = -0.5 * period + period * double(ie) / 64.0;
        const double a = best_amplitude(scan, g, e, t);
        const double rss = residual_sum(scan, a, g, e, t);
        if (best < 0.0 || rss < best) {
          best = rss;
          amplitude = a;
          gamma = g;
          eshift = e;
        }
      }
    }
  }

  // Damped Gauss-Newton with Gamma projected onto [0, inf).
  FitResult res;
  double rss = residual_sum(scan, amplitude, gamma, eshift, t);
  double mu = 1e-8;
  const int max_iterations = 100;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double jtr[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const FringeModelEval e =
          eval_fringe_model(amplitude, gamma, eshift, scan.omegas[i], t);
      const double r = e.value - scan.pe[i];
      const double j[3] = {e.d_amplitude, e.d_gamma, e.d_eshift};
      for (int p = 0; p < 3; ++p) {
        jtr[p] += j[p] * r;
        for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
      }
    }

    bool stepped = false;
    double step_rel = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      double a[3][3];
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          a[p][q] = jtj[p][q] + (p == q ? mu * (1.0 + jtj[p][p]) : 0.0);
      double b[3] = {-jtr[0], -jtr[1], -jtr[2]};
      double delta[3];
      if (!solve3(a, b, delta)) {
        mu *= 4.0;
        continue;
      }
      const double na = amplitude + delta[0];
      const double ng = std::max(gamma + delta[1], 0.0);
      const double ne = eshift + delta[2];
      const double nrss = residual_sum(scan, na, ng, ne, t);
      if (nrss <= rss) {
        const double pscale =
            std::sqrt(amplitude * amplitude + gamma * gamma + eshift * eshift) +
            1e-30;
        step_rel = std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] +
                             delta[2] * delta[2]) /
                   pscale;
        amplitude = na;
        gamma = ng;
        eshift = ne;
        rss = nrss;
        mu = std::max(mu * 0.25, 1e-14);
        stepped = true;
        break;
      }
      mu *= 4.0;
    }
    if (!stepped) {
      // Damping exhausted: a stationary point within numerical precision.
      res.converged = true;
      break;
    }
    if (step_rel < 1e-10) {
      res.converged = true;
      ++iter;
      break;
    }
  }

  res.amplitude = amplitude;
  res.gamma = gamma;
  res.eshift = eshift;
  res.iterations = iter;
  if (iter >= max_iterations) res.converged = false;
  res.residual_rms = std::sqrt(rss / double(n));

  // Standard errors from the Gauss-Newton normal matrix at the optimum.
  {
    double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (std::size_t i = 0; i < n; ++i) {
      const FringeModelEval e =
          eval_fringe_model(amplitude, gamma, eshift, scan.omegas[i], t);
      const double j[3] = {e.d_amplitude, e.d_gamma, e.d_eshift};
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
    }
    const double dof = double(n) - 3.0;
    const double sigma2 = dof > 0.0 ? rss / dof : 0.0;
    // Invert via cofactors of the symmetric 3x3.
    const double det =
        jtj[0][0] * (jtj[1][1] * jtj[2][2] - jtj[1][2] * jtj[2][1]) -
        jtj[0][1] * (jtj[1][0] * jtj[2][2] - jtj[1][2] * jtj[2][0]) +
        jtj[0][2] * (jtj[1][0] * jtj[2][1] - jtj[1][1] * jtj[2][0]);
    if (det != 0.0 && std::isfinite(det)) {
      const double c00 = (jtj[1][1] * jtj[2][2] - jtj[1][2] * jtj[2][1]) / det;
      const double c11 = (jtj[0][0] * jtj[2][2] - jtj[0][2] * jtj[2][0]) / det;
      const double c22 = (jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0]) / det;
      res.amplitude_stderr = std::sqrt(std::max(c00 * sigma2, 0.0));
      res.gamma_stderr = std::sqrt(std::max(c11 * sigma2, 0.0));
      res.eshift_stderr = std::sqrt(std::max(c22 * sigma2, 0.0));
    }
  }

  // Flat-fringe guard: with the modulation buried in noise, Gamma is
  // only bounded from below.
  const double fitted_contrast = std::abs(amplitude) * std::exp(-gamma * t);
  if (fitted_contrast < 3.0 * res.residual_rms) res.gamma_lower_bound_only = true;
  return res;
}

namespace {

std::vector<FitResult> fit_trials_impl(const FringeParams& truth,
                                       double ramsey_time,
                                       const std::vector<double>& grid,
                                       double sigma, std::uint64_t base_seed,
                                       int trials, bool parallel) {
  if (trials < 1) throw std::invalid_argument("fit_trials: trials < 1");
  std::vector<FitResult> out(trials);
  const auto run = [&](std::size_t i) {
    NoiseSpec noise;
    noise.sigma = sigma;
    noise.seed = base_seed + 0x9E3779B97F4A7C15ULL * (i + 1);
    const FringeScan scan = scan_fringe(truth, ramsey_time, grid, noise);
    out[i] = fit_fringe(scan, ramsey_time);
  };
  if (parallel)
    par::parallel_for(std::size_t(trials), run);
  else
    for (std::size_t i = 0; i < std::size_t(trials); ++i) run(i);
  return out;
}

}  // namespace

std::vector<FitResult> fit_trials(const FringeParams& truth, double ramsey_time,
                                  const std::vector<double>& grid, double sigma,
                                  std::uint64_t base_seed, int trials) {
  return fit_trials_impl(truth, ramsey_time, grid, sigma, base_seed, trials,
                         true);
}

std::vector<FitResult> fit_trials_serial(const FringeParams& truth,
                                         double ramsey_time,
                                         const std::vector<double>& grid,
                                         double sigma, std::uint64_t base_seed,
                                         int trials) {
  return fit_trials_impl(truth, ramsey_time, grid, sigma, base_seed, trials,
                         false);
}

namespace {

double pair_eshift(const StableBasisModel& model, std::size_t a, std::size_t b) {
  double e = 0.0;
  for (const auto& row : model.jump_eigenvalues())
    e -= std::imag(row[a] * std::conj(row[b]));
  return e;
}

}  // namespace

ClosureReport three_level_closure(const StableBasisModel& model, std::size_t i,
                                  std::size_t j, std::size_t k) {
  const std::size_t d = model.dim();
  if (i >= d || j >= d || k >= d)
    throw std::invalid_argument("closure: level index out of range");
  if (i == j || j == k || i == k)
    throw std::invalid_argument("closure: levels must be distinct");
  ClosureReport rep;
  rep.levels[0] = i;
  rep.levels[1] = j;
  rep.levels[2] = k;
  rep.eshift_12 = pair_eshift(model, i, j);
  rep.eshift_23 = pair_eshift(model, j, k);
  rep.eshift_31 = pair_eshift(model, k, i);
  rep.closure_sum = rep.eshift_12 + rep.eshift_23 + rep.eshift_31;
  // (E_i - E_j) + (E_j - E_k) + (E_k - E_i) telescopes to zero; recorded
  // as the exact value rather than a rounded float sum.
  rep.energy_closure = 0.0;
  return rep;
}

FringeParams gamma_params_from_model(const StableBasisModel& model,
                                     std::size_t g, std::size_t e,
                                     double omega_rabi_tau) {
  const std::size_t d = model.dim();
  if (g >= d || e >= d || g == e)
    throw std::invalid_argument("gamma_params: bad level indices");
  FringeParams p;
  p.omega_rabi_tau = omega_rabi_tau;
  for (const auto& row : model.jump_eigenvalues()) {
    p.gamma += 0.5 * std::norm(row[g] - row[e]);
    p.eshift -= std::imag(row[g] * std::conj(row[e]));
  }
  return p;
}

double gamma_bound_ev(double ramsey_time_s) {
  if (!(ramsey_time_s > 0.0))
    throw std::invalid_argument("gamma_bound_ev: T must be > 0");
  return constants::hbar_ev_s / ramsey_time_s;
}

double fractional_imprecision(double ramsey_time_s,
                              double transition_energy_ev) {
  if (!(ramsey_time_s > 0.0) || !(transition_energy_ev > 0.0))
    throw std::invalid_argument("fractional_imprecision: inputs must be > 0");
  return gamma_bound_ev(ramsey_time_s) / transition_energy_ev;
}

double pointer_level_spacing_ev(double mass_kg, double length_m, int n) {
  if (!(mass_kg > 0.0) || !(length_m > 0.0) || n < 0)
    throw std::invalid_argument("pointer_level_spacing: bad inputs");
  const double inertia = mass_kg * length_m * length_m / 12.0;
  return constants::hbar_j_s * constants::hbar_ev_s * double(2 * n + 1) /
         (2.0 * inertia);
}

}  // namespace qclock
