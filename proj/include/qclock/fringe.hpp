#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qclock/lindblad.hpp"
#include "qclock/ramsey.hpp"

namespace qclock {

/// Additive Gaussian noise on P_e, clipped to [0, 1]. The seed fully
/// determines the realization, independent of thread count.
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Sampled fringe: P_e versus drive offset from E_e - E_g.
struct FringeScan {
  std::vector<double> omegas;  // rad/s offsets, strictly increasing
  std::vector<double> pe;      // values in [0, 1]
  double ramsey_time = 0.0;    // s
  bool measured = false;       // true when noise was applied

  void validate() const;
};

/// Evaluate the closed-form fringe on a grid.
FringeScan scan_fringe(const FringeParams& params, double ramsey_time,
                       const std::vector<double>& grid,
                       const std::optional<NoiseSpec>& noise = std::nullopt);
/// Evaluate the composed pulse sequence on a grid (the drive detuning is
/// swept across the grid). Grid points run on the worker pool.
FringeScan scan_fringe(const StableBasisModel& model, const ClockTransition& tr,
                       const RamseyConfig& cfg, const std::vector<double>& grid,
                       const std::optional<NoiseSpec>& noise = std::nullopt);
/// Single-threaded reference implementation of the model-source scan;
/// kept for testing the parallel kernel (results must be bit-identical).
FringeScan scan_fringe_serial(const StableBasisModel& model,
                              const ClockTransition& tr, const RamseyConfig& cfg,
                              const std::vector<double>& grid,
                              const std::optional<NoiseSpec>& noise =
                                  std::nullopt);

/// Fringe-shape diagnostics extracted from a scan by local quadratic
/// interpolation around the extrema and the steepest-slope sample.
struct ShapeMetrics {
  double peak_omega = 0.0;         // rad/s
  double min_max_ratio = 0.0;      // P_min / P_max
  double slope_point_ratio = 0.0;  // P(steepest slope) / P_max
  double contrast = 0.0;           // (P_max - P_min) / (P_max + P_min)
};

/// Requires at least one full fringe period of coverage and >= 25 grid
/// points per period; throws std::invalid_argument naming the required
/// density otherwise.
ShapeMetrics shape_metrics(const FringeScan& scan, double ramsey_time);

struct FitResult {
  double gamma = 0.0;      // rad/s, constrained >= 0
  double eshift = 0.0;     // rad/s
  double amplitude = 0.0;  // A in A [1 + e^{-Gamma T} cos((w - EShift) T)]
  double gamma_stderr = 0.0;
  double eshift_stderr = 0.0;
  double amplitude_stderr = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Set when the fitted contrast is below the noise floor; Gamma is
  /// then only a lower bound.
  bool gamma_lower_bound_only = false;
};

struct FitInit {
  double gamma = 0.0;
  double eshift = 0.0;
  double amplitude = 0.0;
};

/// Least-squares fit of the fringe model by a coarse grid search over
/// (Gamma, EShift) followed by damped Gauss-Newton. The amplitude enters
/// linearly and is eliminated exactly during the search stage.
FitResult fit_fringe(const FringeScan& scan, double ramsey_time,
                     const std::optional<FitInit>& init = std::nullopt);

/// Batched synthetic-recovery trials (scan with per-trial noise seed,
/// then fit). Trials run on the worker pool; results are ordered by
/// trial index and independent of thread count.
std::vector<FitResult> fit_trials(const FringeParams& truth, double ramsey_time,
                                  const std::vector<double>& grid, double sigma,
                                  std::uint64_t base_seed, int trials);
std::vector<FitResult> fit_trials_serial(const FringeParams& truth,
                                         double ramsey_time,
                                         const std::vector<double>& grid,
                                         double sigma, std::uint64_t base_seed,
                                         int trials);

/// Cyclic frequency-shift sums around a three-level loop. True energy
/// differences cancel identically; the Lindblad shifts generically do not.
struct ClosureReport {
  std::size_t levels[3] = {0, 1, 2};
  double eshift_12 = 0.0;     // rad/s
  double eshift_23 = 0.0;
  double eshift_31 = 0.0;
  double closure_sum = 0.0;   // rad/s
  double energy_closure = 0.0;  // identically zero by construction
};

ClosureReport three_level_closure(const StableBasisModel& model, std::size_t i,
                                  std::size_t j, std::size_t k);

/// Gamma = sum_a |l_ag - l_ae|^2 / 2 and EShift = -sum_a Im(l_ag l_ae^*)
/// for the given transition. Gamma - i EShift equals lambda_eg of the
/// coherence decay matrix.
FringeParams gamma_params_from_model(const StableBasisModel& model,
                                     std::size_t g, std::size_t e,
                                     double omega_rabi_tau =
                                         1.5707963267948966);

/// hbar / T expressed in eV: the decoherence scale a Ramsey time T can
/// resolve.
double gamma_bound_ev(double ramsey_time_s);

/// (hbar / T) / E: dimensionless imprecision for a transition of energy
/// E (eV) probed with Ramsey time T.
double fractional_imprecision(double ramsey_time_s, double transition_energy_ev);

/// Planar-rotor level spacing E_{n+1} - E_n = hbar^2 (2n+1) / (2 I) for a
/// rod of mass m and length L swiveling about its center (I = m L^2 / 12),
/// in eV.
double pointer_level_spacing_ev(double mass_kg, double length_m, int n);

}  // namespace qclock
