#pragma once

#include <cstddef>
#include <vector>

#include "qclock/complex_matrix.hpp"
#include "qclock/density_matrix.hpp"
#include "qclock/lindblad.hpp"

namespace qclock {

/// The two stable levels driven by the clock laser. The reference
/// frequency is E_e - E_g of the owning model.
struct ClockTransition {
  std::size_t g_index = 0;
  std::size_t e_index = 1;
};

/// Two-pulse sequence parameters. delta_omega is the drive detuning
/// omega - (E_e - E_g) in rad/s. Pulse start times default to 0 and
/// tau + T (the local oscillator runs coherently through the dark time).
struct RamseyConfig {
  double tau = 0.0;            // pulse duration, s
  double free_time = 0.0;      // Ramsey dark time T, s
  double omega_rabi = 0.0;     // Rabi frequency Omega, rad/s
  double delta_omega = 0.0;    // detuning, rad/s
  double pulse1_start = 0.0;   // s
  double pulse2_start = -1.0;  // s; negative means tau + T

  double second_pulse_start() const {
    return pulse2_start >= 0.0 ? pulse2_start : tau + free_time;
  }
  void validate() const;
};

/// Regime diagnostics for the closed-form fringe; advisory, not enforced.
struct RegimeValidity {
  double tau_lambda = 0.0;      // tau * max |lambda_mn|, want << 1
  double detuning_ratio = 0.0;  // |delta_omega| / Omega, want << 1
  double tau_omega = 0.0;       // tau * |omega|, want >> 1
  bool tau_lambda_ok = false;
  bool detuning_ok = false;
  bool drive_fast_ok = false;
  bool all_ok() const { return tau_lambda_ok && detuning_ok && drive_fast_ok; }
};

RegimeValidity regime_validity(const StableBasisModel& model,
                               const ClockTransition& tr,
                               const RamseyConfig& cfg);

/// Fringe-shape parameters: decoherence rate Gamma >= 0, frequency
/// shift EShift (both rad/s), and the pulse area Omega*tau.
struct FringeParams {
  double gamma = 0.0;           // rad/s
  double eshift = 0.0;          // rad/s
  double omega_rabi_tau = 0.0;  // rad
};

/// Interaction-picture pulse propagator on the {g, e} subspace:
/// U_gg = U_ee = cos(Omega tau / 2),
/// U_eg = -i e^{i delta_omega t_start} sin(Omega tau / 2),
/// U_ge = -i e^{-i delta_omega t_start} sin(Omega tau / 2).
/// Returned as a 2x2 matrix ordered (g, e).
ComplexMatrix pulse_unitary(const RamseyConfig& cfg, double t_start);

/// Embeds a 2x2 {g, e} unitary as identity on spectator levels.
ComplexMatrix embed_two_level(const ComplexMatrix& u2, std::size_t dim,
                              const ClockTransition& tr);

/// U rho U^H. Throws std::invalid_argument unless U is unitary to 1e-12.
DensityMatrix apply_pulse(const DensityMatrix& rho, const ComplexMatrix& u);

/// Interaction-picture free evolution: rho_mn -> rho_mn e^{-lambda_mn T}.
DensityMatrix free_evolution(const DensityMatrix& rho,
                             const StableBasisModel& model, double t);
/// Two-level shortcut: only the (g, e) coherence pair decays, with
/// lambda_eg = Gamma - i EShift.
DensityMatrix free_evolution(const DensityMatrix& rho,
                             const FringeParams& params, double t,
                             const ClockTransition& tr = {0, 1});

struct RamseyResult {
  DensityMatrix rho_final;
  double pe = 0.0;
};

/// Full sequence from the pure ground state: pulse, dark time, pulse.
/// P_e is the excited-state population after the second pulse.
RamseyResult ramsey_sequence(const StableBasisModel& model,
                             const ClockTransition& tr,
                             const RamseyConfig& cfg);

/// Closed-form fringe:
/// P_e = sin^2(Omega tau)/2 [1 + e^{-Gamma T} cos((omega_offset - EShift) T)].
double analytic_pe(const FringeParams& params, double omega_offset, double t);

/// Phase transform rho_mn -> e^{+i(E_m - E_n)t} rho_mn together with its
/// inverse. Diagonal elements are untouched.
ComplexMatrix to_interaction_picture(const ComplexMatrix& rho,
                                     const std::vector<double>& energies,
                                     double t);
ComplexMatrix from_interaction_picture(const ComplexMatrix& rho,
                                       const std::vector<double>& energies,
                                       double t);

/// Oscillating drive H' e^{-i omega t} + H'^H e^{+i omega t} with
/// Hermitian H' (coupling = H'_eg = Omega/2), i.e. a cosine drive whose
/// counter-rotating component is kept. With corotating_only the H' of
/// the phasor pair is restricted to |e><g|, which integrates the
/// rotating-wave dynamics exactly; the difference between the two modes
/// isolates the counter-rotating contribution.
struct DriveSpec {
  double omega = 0.0;     // rad/s
  double coupling = 0.0;  // H'_eg, rad/s
  bool corotating_only = false;
};

struct ScheduleSegment {
  double duration = 0.0;  // s
  bool drive_on = false;
};

/// Schroedinger-picture RK4 integration of the master equation with the
/// full oscillating drive (no rotating-wave approximation). total_steps
/// are distributed over segments in proportion to duration. Refuses to
/// run (std::invalid_argument, quoting the required count) when any
/// segment would resolve the fastest oscillation with fewer than 40
/// steps per period.
double exact_driven_pe(const StableBasisModel& model, const ClockTransition& tr,
                       const DriveSpec& drive,
                       const std::vector<ScheduleSegment>& schedule,
                       long long total_steps);

}  // namespace qclock
