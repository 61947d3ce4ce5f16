#include "qclock/ramsey.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qclock/constants.hpp"

namespace qclock {

namespace {

constexpr Complex kImag(0.0, 1.0);

void check_transition(const ClockTransition& tr, std::size_t dim) {
  if (tr.g_index == tr.e_index)
    throw std::invalid_argument("transition: g and e must differ");
  if (tr.g_index >= dim || tr.e_index >= dim)
    throw std::invalid_argument("transition: level index out of range");
}

}  // namespace

void RamseyConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("config: tau must be > 0");
  if (!(free_time > 0.0))
    throw std::invalid_argument("config: free time must be > 0");
  if (!(omega_rabi > 0.0))
    throw std::invalid_argument("config: Rabi frequency must be > 0");
}

RegimeValidity regime_validity(const StableBasisModel& model,
                               const ClockTransition& tr,
                               const RamseyConfig& cfg) {
  check_transition(tr, model.dim());
  const CoherenceDecayMatrix decay = coherence_decay_matrix(model);
  double max_lambda = 0.0;
  for (std::size_t m = 0; m < model.dim(); ++m)
    for (std::size_t n = 0; n < model.dim(); ++n)
      max_lambda = std::max(max_lambda, std::abs(decay.lambda()(m, n)));

  const double omega_ref =
      model.energies()[tr.e_index] - model.energies()[tr.g_index];
  RegimeValidity v;
  v.tau_lambda = cfg.tau * max_lambda;
  v.detuning_ratio = std::abs(cfg.delta_omega) / cfg.omega_rabi;
  v.tau_omega = cfg.tau * std::abs(omega_ref + cfg.delta_omega);
  v.tau_lambda_ok = v.tau_lambda < 1e-2;
  v.detuning_ok = v.detuning_ratio < 1e-1;
  v.drive_fast_ok = v.tau_omega > 1e2;
  return v;
}

ComplexMatrix pulse_unitary(const RamseyConfig& cfg, double t_start) {
  cfg.validate();
  const double half_area = 0.5 * cfg.omega_rabi * cfg.tau;
  const double c = std::cos(half_area);
  const double s = std::sin(half_area);
  const Complex phase = std::exp(kImag * Complex(cfg.delta_omega * t_start, 0.0));
  ComplexMatrix u(2);  // ordered (g, e)
  u(0, 0) = c;
  u(1, 1) = c;
  u(1, 0) = -kImag * phase * s;            // U_eg
  u(0, 1) = -kImag * std::conj(phase) * s; // U_ge
  return u;
}

ComplexMatrix embed_two_level(const ComplexMatrix& u2, std::size_t dim,
                              const ClockTransition& tr) {
  if (u2.dim() != 2)
    throw std::invalid_argument("embed_two_level: expected a 2x2 matrix");
  check_transition(tr, dim);
  ComplexMatrix u = ComplexMatrix::identity(dim);
  u(tr.g_index, tr.g_index) = u2(0, 0);
  u(tr.g_index, tr.e_index) = u2(0, 1);
  u(tr.e_index, tr.g_index) = u2(1, 0);
  u(tr.e_index, tr.e_index) = u2(1, 1);
  return u;
}

DensityMatrix apply_pulse(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.dim() != rho.dim())
    throw std::invalid_argument("apply_pulse: dim mismatch");
  const ComplexMatrix gram = u.adjoint() * u;
  const ComplexMatrix defect = gram - ComplexMatrix::identity(u.dim());
  if (defect.max_norm() > 1e-12)
    throw std::invalid_argument("apply_pulse: matrix not unitary, defect " +
                                std::to_string(defect.max_norm()));
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

DensityMatrix free_evolution(const DensityMatrix& rho,
                             const StableBasisModel& model, double t) {
  if (t < 0.0) throw std::invalid_argument("free_evolution: negative time");
  if (rho.dim() != model.dim())
    throw std::invalid_argument("free_evolution: dim mismatch");
  const CoherenceDecayMatrix decay = coherence_decay_matrix(model);
  ComplexMatrix out(rho.dim());
  for (std::size_t m = 0; m < rho.dim(); ++m)
    for (std::size_t n = 0; n < rho.dim(); ++n)
      out(m, n) = (m == n)
                      ? rho(m, n)
                      : rho(m, n) * std::exp(-decay.lambda()(m, n) *
                                             Complex(t, 0.0));
  return DensityMatrix(out);
}

DensityMatrix free_evolution(const DensityMatrix& rho,
                             const FringeParams& params, double t,
                             const ClockTransition& tr) {
  if (t < 0.0) throw std::invalid_argument("free_evolution: negative time");
  check_transition(tr, rho.dim());
  const Complex lambda_eg(params.gamma, -params.eshift);
  ComplexMatrix out = rho.matrix();
  out(tr.e_index, tr.g_index) *= std::exp(-lambda_eg * Complex(t, 0.0));
  out(tr.g_index, tr.e_index) *=
      std::exp(-std::conj(lambda_eg) * Complex(t, 0.0));
  return DensityMatrix(out);
}

RamseyResult ramsey_sequence(const StableBasisModel& model,
                             const ClockTransition& tr,
                             const RamseyConfig& cfg) {
  cfg.validate();
  check_transition(tr, model.dim());

  const DensityMatrix ground = DensityMatrix::pure_state(model.dim(), tr.g_index);
  const ComplexMatrix u1 =
      embed_two_level(pulse_unitary(cfg, cfg.pulse1_start), model.dim(), tr);
  const DensityMatrix after_first = apply_pulse(ground, u1);
  const DensityMatrix after_free =
      free_evolution(after_first, model, cfg.free_time);
  const ComplexMatrix u2 = embed_two_level(
      pulse_unitary(cfg, cfg.second_pulse_start()), model.dim(), tr);
  DensityMatrix final_state = apply_pulse(after_free, u2);
  const double pe = final_state(tr.e_index, tr.e_index).real();
  return RamseyResult{std::move(final_state), pe};
}

double analytic_pe(const FringeParams& params, double omega_offset, double t) {
  if (t < 0.0) throw std::invalid_argument("analytic_pe: negative time");
  const double s = std::sin(params.omega_rabi_tau);
  const double contrast = std::exp(-params.gamma * t);
  const double pe =
      0.5 * s * s * (1.0 + contrast * std::cos((omega_offset - params.eshift) * t));
  return std::min(std::max(pe, 0.0), 1.0);
}

ComplexMatrix to_interaction_picture(const ComplexMatrix& rho,
                                     const std::vector<double>& energies,
                                     double t) {
  const std::size_t d = rho.dim();
  if (energies.size() != d)
    throw std::invalid_argument("interaction picture: dim mismatch");
  ComplexMatrix out(d);
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t n = 0; n < d; ++n)
      out(m, n) = (m == n) ? rho(m, n)
                           : rho(m, n) * std::exp(kImag * Complex(
                                             (energies[m] - energies[n]) * t,
                                             0.0));
  return out;
}

ComplexMatrix from_interaction_picture(const ComplexMatrix& rho,
                                       const std::vector<double>& energies,
                                       double t) {
  return to_interaction_picture(rho, energies, -t);
}

double exact_driven_pe(const StableBasisModel& model, const ClockTransition& tr,
                       const DriveSpec& drive,
                       const std::vector<ScheduleSegment>& schedule,
                       long long total_steps) {
  check_transition(tr, model.dim());
  if (total_steps < 1)
    throw std::invalid_argument("exact_driven_pe: steps < 1");
  if (!(drive.omega > 0.0))
    throw std::invalid_argument("exact_driven_pe: drive frequency must be > 0");

  double total_duration = 0.0;
  for (const auto& seg : schedule) {
    if (seg.duration < 0.0)
      throw std::invalid_argument("exact_driven_pe: negative segment duration");
    total_duration += seg.duration;
  }
  if (total_duration <= 0.0)
    throw std::invalid_argument("exact_driven_pe: empty schedule");

  // The fastest phase in the Schroedinger picture is set by the drive
  // and by the bare level splittings.
  double fastest = drive.omega;
  for (double em : model.energies())
    for (double en : model.energies())
      fastest = std::max(fastest, std::abs(em - en));
  const double max_dt = (2.0 * constants::pi / fastest) / 40.0;
  const double dt_nominal = total_duration / double(total_steps);
  if (dt_nominal > max_dt) {
    const long long required =
        static_cast<long long>(std::ceil(total_duration / max_dt));
    throw std::invalid_argument(
        "exact_driven_pe: step too coarse for the fast oscillation; need at "
        "least " +
        std::to_string(required) + " steps");
  }

  const std::size_t d = model.dim();
  const LindbladGenerator free_gen = model.to_generator();
  ComplexMatrix h_drive_base(d);
  h_drive_base(tr.e_index, tr.g_index) = drive.coupling;
  h_drive_base(tr.g_index, tr.e_index) = drive.coupling;

  ComplexMatrix rho = DensityMatrix::pure_state(d, tr.g_index).matrix();
  ComplexMatrix h(d), k1(d), k2(d), k3(d), k4(d), tmp(d);

  // RHS with H(t) = H0 + 2 coupling cos(omega t) on the transition, or
  // the single co-rotating phasor when requested.
  const auto rhs_into = [&](const ComplexMatrix& state, double time, bool on,
                            ComplexMatrix& out) {
    h = free_gen.hamiltonian();
    if (on) {
      if (drive.corotating_only) {
        const Complex phasor =
            drive.coupling * std::exp(Complex(0.0, -drive.omega * time));
        h(tr.e_index, tr.g_index) += phasor;
        h(tr.g_index, tr.e_index) += std::conj(phasor);
      } else {
        const double osc = 2.0 * drive.coupling * std::cos(drive.omega * time);
        h(tr.e_index, tr.g_index) += osc;
        h(tr.g_index, tr.e_index) += osc;
      }
    }
    ComplexMatrix::multiply_into(h, state, out);
    ComplexMatrix::multiply_into(state, h, tmp);
    out -= tmp;
    out *= -kImag;
    for (const ComplexMatrix& l : free_gen.jumps()) {
      const ComplexMatrix ld = l.adjoint();
      const ComplexMatrix ldl = ld * l;
      out += l * state * ld;
      out.add_scaled(anticommutator(ldl, state), Complex(-0.5, 0.0));
    }
  };

  double seg_start = 0.0;
  ComplexMatrix stage(d);
  for (const auto& seg : schedule) {
    if (seg.duration == 0.0) continue;
    // Proportional share of the step budget, clamped so every segment
    // individually resolves the fast oscillation.
    const long long share = std::llround(double(total_steps) * seg.duration /
                                         total_duration);
    const long long needed =
        static_cast<long long>(std::ceil(seg.duration / max_dt));
    const long long n = std::max({share, needed, 1LL});
    const double dt = seg.duration / double(n);
    for (long long s = 0; s < n; ++s) {
      // Times from the step index, not accumulation, so the drive phase
      // carries no rounding drift over multi-million-step runs.
      const double t = seg_start + double(s) * dt;
      rhs_into(rho, t, seg.drive_on, k1);
      stage = rho;
      stage.add_scaled(k1, Complex(0.5 * dt, 0.0));
      rhs_into(stage, t + 0.5 * dt, seg.drive_on, k2);
      stage = rho;
      stage.add_scaled(k2, Complex(0.5 * dt, 0.0));
      rhs_into(stage, t + 0.5 * dt, seg.drive_on, k3);
      stage = rho;
      stage.add_scaled(k3, Complex(dt, 0.0));
      rhs_into(stage, t + dt, seg.drive_on, k4);
      rho.add_scaled(k1, Complex(dt / 6.0, 0.0));
      rho.add_scaled(k2, Complex(dt / 3.0, 0.0));
      rho.add_scaled(k3, Complex(dt / 3.0, 0.0));
      rho.add_scaled(k4, Complex(dt / 6.0, 0.0));
    }
    seg_start += seg.duration;
  }
  return DensityMatrix(rho)(tr.e_index, tr.e_index).real();
}

}  // namespace qclock
