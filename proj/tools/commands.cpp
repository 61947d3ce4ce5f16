#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <vector>

#include "qclock/constants.hpp"
#include "qclock/fringe.hpp"
#include "qclock/io.hpp"
#include "qclock/lindblad.hpp"
#include "qclock/linalg.hpp"
#include "qclock/ramsey.hpp"
#include "qclock/rng.hpp"

namespace qclock::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = constants::pi;

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void log_note(const CommonOptions& opt, const std::string& msg) {
  if (!opt.quiet) std::cerr << msg << "\n";
}

void emit_summary(const json& summary) { std::cout << summary.dump() << "\n"; }

json load_config(const CommonOptions& opt) {
  if (opt.config_path.empty())
    throw io::ConfigError("--config", "a config file is required");
  return io::load_json_file(opt.config_path);
}

StableBasisModel model_from_config(const json& cfg, const fs::path& base) {
  if (cfg.contains("model")) return io::model_from_json(cfg["model"], "model");
  if (cfg.contains("model_path")) {
    fs::path p = cfg["model_path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    return io::model_from_json(io::load_json_file(p), p.string());
  }
  throw io::ConfigError("model", "missing field (or model_path)");
}

std::vector<double> grid_from_config(const json& cfg,
                                     const std::optional<int>& points_override) {
  const json& grid = io::require_object(cfg, "grid", "");
  const double center = io::optional_number(grid, "center_rad_s", "grid", 0.0);
  const double span = io::require_number(grid, "span_rad_s", "grid");
  std::int64_t points = io::require_int(grid, "points", "grid");
  if (points_override) points = *points_override;
  if (points < 2) throw io::ConfigError("grid.points", "must be >= 2");
  if (!(span > 0.0)) throw io::ConfigError("grid.span_rad_s", "must be > 0");
  std::vector<double> g(points);
  for (std::int64_t i = 0; i < points; ++i)
    g[i] = center - 0.5 * span + span * double(i) / double(points - 1);
  return g;
}

json validity_to_json(const RegimeValidity& v) {
  json j;
  j["tau_lambda"] = v.tau_lambda;
  j["detuning_ratio"] = v.detuning_ratio;
  j["tau_omega"] = v.tau_omega;
  j["tau_lambda_ok"] = v.tau_lambda_ok;
  j["detuning_ok"] = v.detuning_ok;
  j["drive_fast_ok"] = v.drive_fast_ok;
  return j;
}

void warn_validity(const CommonOptions& opt, const RegimeValidity& v) {
  if (v.all_ok() || opt.quiet) return;
  if (!v.tau_lambda_ok)
    std::cerr << "warning: tau*|lambda| = " << v.tau_lambda
              << " is not small; closed-form fringe may be off\n";
  if (!v.detuning_ok)
    std::cerr << "warning: |delta_omega|/Omega = " << v.detuning_ratio
              << " is not small\n";
  if (!v.drive_fast_ok)
    std::cerr << "warning: tau*|omega| = " << v.tau_omega
              << " is not large; rotating-wave treatment is suspect\n";
}

int run_guarded(const CommonOptions& opt, const char* command,
                int (*body)(const CommonOptions&)) {
  try {
    return body(opt);
  } catch (const io::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    json summary;
    summary["command"] = command;
    summary["status"] = "input_error";
    summary["error"] = e.what();
    emit_summary(summary);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    json summary;
    summary["command"] = command;
    summary["status"] = "input_error";
    summary["error"] = e.what();
    emit_summary(summary);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    json summary;
    summary["command"] = command;
    summary["status"] = "failure";
    summary["error"] = e.what();
    emit_summary(summary);
    return 1;
  }
}

json rho_to_snapshot(const DensityMatrix& rho, double t, const char* label) {
  json j;
  j["t_s"] = t;
  j["label"] = label;
  j["rho"] = io::matrix_to_json(rho.matrix());
  return j;
}

int simulate_body(const CommonOptions& opt) {
  const json cfg = load_config(opt);
  const StableBasisModel model =
      model_from_config(cfg, opt.config_path.parent_path());
  const ClockTransition tr = io::transition_from_json(
      io::require_object(cfg, "transition", ""), "transition");
  const RamseyConfig ramsey = io::ramsey_config_from_json(
      io::require_object(cfg, "ramsey", ""), "ramsey");
  const int free_snapshots = static_cast<int>(
      io::optional_number(cfg, "free_snapshots", "", 5.0));

  const RegimeValidity validity = regime_validity(model, tr, ramsey);
  warn_validity(opt, validity);

  // Staged composition, interaction picture throughout.
  const DensityMatrix ground = DensityMatrix::pure_state(model.dim(), tr.g_index);
  const ComplexMatrix u1 = embed_two_level(
      pulse_unitary(ramsey, ramsey.pulse1_start), model.dim(), tr);
  const DensityMatrix after1 = apply_pulse(ground, u1);

  json snapshots = json::array();
  snapshots.push_back(rho_to_snapshot(ground, 0.0, "initial"));
  snapshots.push_back(rho_to_snapshot(after1, ramsey.tau, "after_pulse1"));
  for (int k = 1; k <= free_snapshots; ++k) {
    const double tk = ramsey.free_time * double(k) / double(free_snapshots + 1);
    snapshots.push_back(rho_to_snapshot(free_evolution(after1, model, tk),
                                        ramsey.tau + tk, "free_evolution"));
  }
  const DensityMatrix after_free = free_evolution(after1, model, ramsey.free_time);
  snapshots.push_back(rho_to_snapshot(after_free, ramsey.tau + ramsey.free_time,
                                      "after_free_evolution"));
  const ComplexMatrix u2 = embed_two_level(
      pulse_unitary(ramsey, ramsey.second_pulse_start()), model.dim(), tr);
  const DensityMatrix final_state = apply_pulse(after_free, u2);
  const double t_final = ramsey.second_pulse_start() + ramsey.tau;
  snapshots.push_back(rho_to_snapshot(final_state, t_final, "after_pulse2"));

  const double pe_sequence = final_state(tr.e_index, tr.e_index).real();
  const FringeParams params = gamma_params_from_model(
      model, tr.g_index, tr.e_index, ramsey.omega_rabi * ramsey.tau);
  const double pe_closed = analytic_pe(params, ramsey.delta_omega,
                                       ramsey.free_time);

  json out;
  out["schema_version"] = io::kSchemaVersion;
  out["type"] = "simulate_result";
  out["picture"] = "interaction";
  out["config"] = {{"model", io::model_to_json(model)},
                   {"transition", io::transition_to_json(tr)},
                   {"ramsey", io::ramsey_config_to_json(ramsey)},
                   {"free_snapshots", free_snapshots}};
  out["snapshots"] = snapshots;
  out["pe_sequence"] = pe_sequence;
  out["pe_closed_form"] = pe_closed;
  out["difference"] = pe_sequence - pe_closed;
  out["fringe_params"] = io::fringe_params_to_json(params);
  out["validity"] = validity_to_json(validity);

  fs::create_directories(opt.out_dir);
  const fs::path out_path = opt.out_dir / "simulate.json";
  io::write_json_file(out_path, out);
  log_note(opt, "wrote " + out_path.string());

  json summary;
  summary["command"] = "simulate";
  summary["status"] = "ok";
  summary["pe_sequence"] = pe_sequence;
  summary["pe_closed_form"] = pe_closed;
  summary["output"] = out_path.string();
  emit_summary(summary);
  return 0;
}

int scan_body(const CommonOptions& opt) {
  const json cfg = load_config(opt);
  const std::string source =
      cfg.contains("source") ? cfg["source"].get<std::string>() : "model";
  const std::vector<double> grid = grid_from_config(cfg, opt.points);

  std::optional<NoiseSpec> noise;
  if (cfg.contains("noise")) {
    NoiseSpec n;
    n.sigma = io::require_number(cfg["noise"], "sigma", "noise");
    n.seed = static_cast<std::uint64_t>(
        io::optional_number(cfg["noise"], "seed", "noise", 0.0));
    if (opt.seed) n.seed = *opt.seed;
    noise = n;
  } else if (opt.seed) {
    log_note(opt, "note: --seed given but the config requests no noise");
  }

  FringeScan scan;
  json provenance;
  provenance["source"] = source;
  if (source == "params") {
    const FringeParams params = io::fringe_params_from_json(
        io::require_object(cfg, "params", ""), "params");
    const double t = io::require_number(cfg, "ramsey_time_s", "");
    if (!(t > 0.0)) throw io::ConfigError("ramsey_time_s", "must be > 0");
    scan = scan_fringe(params, t, grid, noise);
    provenance["params"] = io::fringe_params_to_json(params);
    provenance["ramsey_time_s"] = t;
  } else if (source == "model") {
    const StableBasisModel model =
        model_from_config(cfg, opt.config_path.parent_path());
    const ClockTransition tr = io::transition_from_json(
        io::require_object(cfg, "transition", ""), "transition");
    const RamseyConfig ramsey = io::ramsey_config_from_json(
        io::require_object(cfg, "ramsey", ""), "ramsey");
    warn_validity(opt, regime_validity(model, tr, ramsey));
    scan = scan_fringe(model, tr, ramsey, grid, noise);
    provenance["model"] = io::model_to_json(model);
    provenance["transition"] = io::transition_to_json(tr);
    provenance["ramsey"] = io::ramsey_config_to_json(ramsey);
    provenance["fringe_params"] = io::fringe_params_to_json(
        gamma_params_from_model(model, tr.g_index, tr.e_index,
                                ramsey.omega_rabi * ramsey.tau));
  } else {
    throw io::ConfigError("source", "expected 'model' or 'params'");
  }
  if (noise) {
    provenance["noise"] = {{"sigma", noise->sigma}, {"seed", noise->seed}};
  }

  fs::create_directories(opt.out_dir);
  const fs::path csv_path = opt.out_dir / "scan.csv";
  const fs::path meta_path = opt.out_dir / "scan_meta.json";
  io::write_scan_csv(csv_path, scan);
  io::write_json_file(meta_path, io::scan_meta_to_json(scan, provenance));
  log_note(opt, "wrote " + csv_path.string() + " and " + meta_path.string());

  json summary;
  summary["command"] = "scan";
  summary["status"] = "ok";
  summary["points"] = scan.omegas.size();
  summary["csv"] = csv_path.string();
  summary["meta"] = meta_path.string();
  emit_summary(summary);
  return 0;
}

int fit_body(const CommonOptions& opt) {
  const json cfg = load_config(opt);
  const fs::path base = opt.config_path.parent_path();

  if (!cfg.contains("scan_csv"))
    throw io::ConfigError("scan_csv", "missing field");
  fs::path csv = cfg["scan_csv"].get<std::string>();
  if (csv.is_relative()) csv = base / csv;
  FringeScan scan = io::read_scan_csv(csv);

  double ramsey_time = 0.0;
  if (cfg.contains("ramsey_time_s")) {
    ramsey_time = io::require_number(cfg, "ramsey_time_s", "");
  } else if (cfg.contains("scan_meta")) {
    fs::path meta = cfg["scan_meta"].get<std::string>();
    if (meta.is_relative()) meta = base / meta;
    ramsey_time =
        io::require_number(io::load_json_file(meta), "ramsey_time_s",
                           meta.string());
  } else {
    throw io::ConfigError("ramsey_time_s", "missing (or provide scan_meta)");
  }
  scan.ramsey_time = ramsey_time;

  std::optional<FitInit> init;
  if (cfg.contains("init")) {
    FitInit fi;
    fi.amplitude = io::require_number(cfg["init"], "amplitude", "init");
    fi.gamma = io::require_number(cfg["init"], "gamma_rad_s", "init");
    fi.eshift = io::require_number(cfg["init"], "eshift_rad_s", "init");
    init = fi;
  }

  const FitResult fit = fit_fringe(scan, ramsey_time, init);

  json out = io::fit_result_to_json(fit);
  out["type"] = "fit_result";
  out["config"] = {{"scan_csv", csv.string()},
                   {"ramsey_time_s", ramsey_time},
                   {"points", scan.omegas.size()}};
  fs::create_directories(opt.out_dir);
  const fs::path out_path = opt.out_dir / "fit.json";
  io::write_json_file(out_path, out);
  log_note(opt, "wrote " + out_path.string());

  json summary;
  summary["command"] = "fit";
  summary["status"] = fit.converged ? "ok" : "fit_failure";
  summary["gamma_rad_s"] = fit.gamma;
  summary["eshift_rad_s"] = fit.eshift;
  summary["converged"] = fit.converged;
  summary["output"] = out_path.string();
  emit_summary(summary);
  if (!fit.converged) {
    std::cerr << "error: fit did not converge after " << fit.iterations
              << " iterations\n";
    return 1;
  }
  return 0;
}

int closure_body(const CommonOptions& opt) {
  const json cfg = load_config(opt);
  const StableBasisModel model =
      model_from_config(cfg, opt.config_path.parent_path());
  if (!cfg.contains("levels") || !cfg["levels"].is_array() ||
      cfg["levels"].size() != 3)
    throw io::ConfigError("levels", "expected [i, j, k]");
  const std::size_t i = cfg["levels"][0].get<std::size_t>();
  const std::size_t j = cfg["levels"][1].get<std::size_t>();
  const std::size_t k = cfg["levels"][2].get<std::size_t>();

  ClosureReport rep;
  try {
    rep = three_level_closure(model, i, j, k);
  } catch (const std::invalid_argument& e) {
    throw io::ConfigError("levels", e.what());
  }

  json out = io::closure_report_to_json(rep);
  out["type"] = "closure_report";
  out["config"] = {{"model", io::model_to_json(model)},
                   {"levels", {i, j, k}}};
  fs::create_directories(opt.out_dir);
  const fs::path out_path = opt.out_dir / "closure.json";
  io::write_json_file(out_path, out);
  log_note(opt, "wrote " + out_path.string());

  json summary;
  summary["command"] = "closure";
  summary["status"] = "ok";
  summary["closure_sum_rad_s"] = rep.closure_sum;
  summary["output"] = out_path.string();
  emit_summary(summary);
  return 0;
}

int bounds_body(const CommonOptions& opt) {
  const json cfg = load_config(opt);
  const double t = io::require_number(cfg, "ramsey_time_s", "");
  if (!(t > 0.0)) throw io::ConfigError("ramsey_time_s", "must be > 0");

  json out;
  out["schema_version"] = io::kSchemaVersion;
  out["type"] = "bounds_report";
  out["ramsey_time_s"] = t;
  // Extreme case 1: a flat per-transition bound, hbar/T.
  out["gamma_bound_ev"] = gamma_bound_ev(t);
  // Extreme case 2: the bound scaled by the transition energy.
  if (cfg.contains("transition_energy_ev")) {
    const double e = io::require_number(cfg, "transition_energy_ev", "");
    if (!(e > 0.0))
      throw io::ConfigError("transition_energy_ev", "must be > 0");
    out["transition_energy_ev"] = e;
    out["fractional_imprecision"] = fractional_imprecision(t, e);
  }
  if (cfg.contains("pointer")) {
    const json& p = cfg["pointer"];
    const double mass = io::require_number(p, "mass_kg", "pointer");
    const double length = io::require_number(p, "length_m", "pointer");
    const int n = static_cast<int>(
        io::optional_number(p, "level_index", "pointer", 0.0));
    json pj;
    pj["mass_kg"] = mass;
    pj["length_m"] = length;
    pj["level_index"] = n;
    try {
      pj["spacing_ev"] = pointer_level_spacing_ev(mass, length, n);
    } catch (const std::invalid_argument& e) {
      throw io::ConfigError("pointer", e.what());
    }
    out["pointer"] = pj;
  }

  fs::create_directories(opt.out_dir);
  const fs::path out_path = opt.out_dir / "bounds.json";
  io::write_json_file(out_path, out);
  log_note(opt, "wrote " + out_path.string());

  json summary;
  summary["command"] = "bounds";
  summary["status"] = "ok";
  summary["gamma_bound_ev"] = out["gamma_bound_ev"];
  summary["output"] = out_path.string();
  emit_summary(summary);
  return 0;
}

// ---------------------------------------------------------------------------
// verify: self-contained property suite over generated cases.

struct PropertyOutcome {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  std::string detail;
  json replay;  // non-null when the property failed
};

ComplexMatrix random_hermitian_local(SplitMix64& rng, std::size_t d) {
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(i, j) = Complex(rng.next_uniform(-1.0, 1.0), rng.next_uniform(-1.0, 1.0));
  ComplexMatrix h(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return h;
}

LindbladGenerator random_generator_local(SplitMix64& rng, std::size_t d,
                                         std::size_t n_jumps) {
  std::vector<ComplexMatrix> jumps;
  for (std::size_t a = 0; a < n_jumps; ++a) {
    ComplexMatrix l(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        l(i, j) =
            Complex(rng.next_uniform(-0.7, 0.7), rng.next_uniform(-0.7, 0.7));
    jumps.push_back(std::move(l));
  }
  return LindbladGenerator(random_hermitian_local(rng, d), std::move(jumps));
}

StableBasisModel random_model_local(SplitMix64& rng, std::size_t d,
                                    std::size_t n_jumps) {
  std::vector<double> energies(d);
  for (auto& e : energies) e = rng.next_uniform(-1.0, 1.0);
  std::vector<std::vector<Complex>> ells(n_jumps, std::vector<Complex>(d));
  for (auto& row : ells)
    for (auto& l : row)
      l = Complex(rng.next_uniform(-1.0, 1.0), rng.next_uniform(-1.0, 1.0));
  return StableBasisModel(std::move(energies), std::move(ells));
}

DensityMatrix random_density_local(SplitMix64& rng, std::size_t d) {
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(i, j) = Complex(rng.next_uniform(-1.0, 1.0), rng.next_uniform(-1.0, 1.0));
  return DensityMatrix(m * m.adjoint());
}

PropertyOutcome check_liouvillian_rhs(std::uint64_t seed) {
  PropertyOutcome out;
  out.name = "liouvillian_matches_direct_rhs";
  out.pass = true;
  SplitMix64 rng(seed ^ 0x11);
  for (int rep = 0; rep < 10 && out.pass; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const LindbladGenerator gen = random_generator_local(rng, d, 1 + rep % 3);
    const ComplexMatrix s = liouvillian_superoperator(gen);
    const DensityMatrix rho = random_density_local(rng, d);
    const std::vector<Complex> v = vec_columns(rho.matrix());
    std::vector<Complex> sv(v.size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j2 = 0; j2 < v.size(); ++j2) sv[i] += s(i, j2) * v[j2];
    const double err =
        (unvec_columns(sv, d) - lindblad_rhs(gen, rho.matrix())).max_norm();
    out.worst = std::max(out.worst, err);
    if (err > 1e-12) {
      out.pass = false;
      out.replay = io::generator_to_json(gen);
    }
  }
  out.detail = "max |L vec(rho) - rhs(rho)| = " + fmt_real(out.worst);
  return out;
}

PropertyOutcome check_analytic_vs_superoperator(std::uint64_t seed) {
  PropertyOutcome out;
  out.name = "analytic_equals_superoperator";
  out.pass = true;
  SplitMix64 rng(seed ^ 0x22);
  for (int rep = 0; rep < 20 && out.pass; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const StableBasisModel model = random_model_local(rng, d, 2);
    const DensityMatrix rho = random_density_local(rng, d);
    const CoherenceDecayMatrix decay = coherence_decay_matrix(model);
    double lam = 0.1;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j2 = 0; j2 < d; ++j2)
        lam = std::max(lam, std::abs(decay.lambda()(i, j2)));
    const LindbladGenerator gen = model.to_generator();
    for (double f : {0.1, 1.0, 10.0}) {
      const double err = (analytic_propagate(model, rho, f / lam).matrix() -
                          propagate(gen, rho, f / lam).matrix())
                             .max_norm();
      out.worst = std::max(out.worst, err);
      if (err > 1e-8) {
        out.pass = false;
        out.replay = io::model_to_json(model);
        break;
      }
    }
  }
  out.detail = "max |analytic - superoperator| = " + fmt_real(out.worst);
  return out;
}

PropertyOutcome check_entropy_monotone(std::uint64_t seed) {
  PropertyOutcome out;
  out.name = "entropy_monotone_under_condition";
  out.pass = true;
  SplitMix64 rng(seed ^ 0x33);
  double worst_drop = 0.0;
  for (int rep = 0; rep < 10 && out.pass; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const StableBasisModel model = random_model_local(rng, d, 2);
    const LindbladGenerator gen = model.to_generator();
    if (!entropy_condition_check(gen).holds) {
      out.pass = false;
      out.detail = "diagonal generator failed the entropy condition";
      out.replay = io::model_to_json(model);
      return out;
    }
    const DensityMatrix rho = random_density_local(rng, d);
    double prev = von_neumann_entropy(rho);
    for (double t : {0.2, 0.5, 1.0, 2.0, 4.0}) {
      const double s = von_neumann_entropy(propagate(gen, rho, t));
      worst_drop = std::max(worst_drop, prev - s);
      if (s < prev - 1e-9) {
        out.pass = false;
        out.replay = io::model_to_json(model);
        break;
      }
      prev = s;
    }
  }
  out.worst = worst_drop;
  out.detail = "worst entropy drop = " + fmt_real(worst_drop);
  return out;
}

PropertyOutcome check_entropy_counterexample() {
  PropertyOutcome out;
  out.name = "entropy_counterexample_decreases";
  ComplexMatrix l(2);
  l(0, 1) = 1.0;
  const LindbladGenerator gen(ComplexMatrix::zero(2), {l});
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const double drop = von_neumann_entropy(mixed) -
                      von_neumann_entropy(propagate(gen, mixed, 1.0));
  out.worst = drop;
  out.pass = drop > 1e-3 && !entropy_condition_check(gen).holds;
  out.detail = "entropy drop from the mixed state = " + fmt_real(drop);
  if (!out.pass) out.replay = io::generator_to_json(gen);
  return out;
}

PropertyOutcome check_complete_positivity(std::uint64_t seed) {
  PropertyOutcome out;
  out.name = "complete_positivity_choi";
  out.pass = true;
  SplitMix64 rng(seed ^ 0x44);
  double worst = 0.0;
  for (int rep = 0; rep < 10 && out.pass; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const LindbladGenerator gen = random_generator_local(rng, d, 1 + rep % 2);
    const double scale =
        std::max(liouvillian_superoperator(gen).max_norm(), 1e-6);
    const double t = rng.next_uniform(0.0, 10.0 / scale);
    const ChoiCheckResult res = choi_psd_check(gen, t);
    worst = std::min(worst, res.min_eigenvalue);
    if (!res.completely_positive) {
      out.pass = false;
      out.replay = io::generator_to_json(gen);
      out.replay["t_s"] = t;
    }
  }
  out.worst = worst;
  out.detail = "min Choi eigenvalue = " + fmt_real(worst);
  return out;
}

PropertyOutcome check_injected_invalid_generator() {
  PropertyOutcome out;
  out.name = "complete_positivity_choi[injected_invalid_generator]";
  ComplexMatrix l(2);
  l(0, 0) = std::sqrt(0.5);
  l(1, 1) = -std::sqrt(0.5);
  const LindbladGenerator gen(ComplexMatrix::zero(2), {l});
  const ComplexMatrix bad = negated_dissipator_superoperator(gen);
  const ChoiCheckResult res = choi_psd_check_superoperator(bad, 2, 1.0);
  out.worst = res.min_eigenvalue;
  // The dissipator is negated, so complete positivity MUST fail; the
  // property asserts the checker would have accepted it, which is false
  // by construction. This is the designed failure path.
  out.pass = res.completely_positive;
  out.detail = "min Choi eigenvalue = " + fmt_real(res.min_eigenvalue) +
               " (negated dissipator)";
  out.replay = io::generator_to_json(gen);
  out.replay["dissipator_sign"] = -1;
  out.replay["t_s"] = 1.0;
  return out;
}

PropertyOutcome check_sequence_vs_closed_form(std::uint64_t seed) {
  PropertyOutcome out;
  out.name = "sequence_equals_closed_form";
  out.pass = true;
  SplitMix64 rng(seed ^ 0x55);
  for (int rep = 0; rep < 50 && out.pass; ++rep) {
    StableBasisModel model = random_model_local(rng, 2, 1);
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
    out.worst = std::max(out.worst, err);
    if (err > 1e-10) {
      out.pass = false;
      out.replay = io::model_to_json(model);
      out.replay["ramsey"] = io::ramsey_config_to_json(cfg);
    }
  }
  out.detail = "max |sequence - closed form| = " + fmt_real(out.worst);
  return out;
}

PropertyOutcome check_golden_shape() {
  PropertyOutcome out;
  out.name = "golden_shape_ratios";
  const FringeParams params{1.0, 0.0, kPi / 2.0};
  std::vector<double> grid(2001);
  for (int i = 0; i < 2001; ++i)
    grid[i] = -2.0 * kPi + 4.0 * kPi * double(i) / 2000.0;
  const ShapeMetrics m = shape_metrics(scan_fringe(params, 1.0, grid), 1.0);
  const double err1 = std::abs(m.min_max_ratio - 0.462);
  const double err2 = std::abs(m.slope_point_ratio - 0.731);
  out.worst = std::max(err1, err2);
  out.pass = err1 <= 5e-3 && err2 <= 5e-3;
  out.detail = "min/max = " + fmt_real(m.min_max_ratio) +
               ", slope ratio = " + fmt_real(m.slope_point_ratio);
  if (!out.pass) {
    out.replay = {{"min_max_ratio", m.min_max_ratio},
                  {"slope_point_ratio", m.slope_point_ratio}};
  }
  return out;
}

PropertyOutcome check_trace_semigroup(std::uint64_t seed) {
  PropertyOutcome out;
  out.name = "trace_preserving_semigroup";
  out.pass = true;
  SplitMix64 rng(seed ^ 0x66);
  for (int rep = 0; rep < 8 && out.pass; ++rep) {
    const std::size_t d = 2 + rep % 3;
    const LindbladGenerator gen = random_generator_local(rng, d, 2);
    const DensityMatrix rho = random_density_local(rng, d);
    const double s = rng.next_uniform(0.1, 0.6);
    const double t = rng.next_uniform(0.1, 0.6);
    const DensityMatrix two_leg = propagate(gen, propagate(gen, rho, s), t);
    const DensityMatrix one_leg = propagate(gen, rho, s + t);
    const double trace_err = std::abs(two_leg.matrix().trace().real() - 1.0);
    const double comp_err = (two_leg.matrix() - one_leg.matrix()).max_norm();
    out.worst = std::max({out.worst, trace_err, comp_err});
    if (trace_err > 1e-10 || comp_err > 1e-9) {
      out.pass = false;
      out.replay = io::generator_to_json(gen);
    }
  }
  out.detail = "worst trace/semigroup residual = " + fmt_real(out.worst);
  return out;
}

int verify_body(const CommonOptions& opt) {
  json cfg;
  if (!opt.config_path.empty()) cfg = io::load_json_file(opt.config_path);
  std::uint64_t seed = 20160915;
  if (cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
  if (opt.seed) seed = *opt.seed;
  const bool inject = cfg.contains("inject_invalid_generator") &&
                      cfg["inject_invalid_generator"].get<bool>();

  std::vector<PropertyOutcome> outcomes;
  outcomes.push_back(check_liouvillian_rhs(seed));
  outcomes.push_back(check_analytic_vs_superoperator(seed));
  outcomes.push_back(check_entropy_monotone(seed));
  outcomes.push_back(check_entropy_counterexample());
  outcomes.push_back(check_complete_positivity(seed));
  if (inject) outcomes.push_back(check_injected_invalid_generator());
  outcomes.push_back(check_sequence_vs_closed_form(seed));
  outcomes.push_back(check_golden_shape());
  outcomes.push_back(check_trace_semigroup(seed));

  fs::create_directories(opt.out_dir);
  bool all_pass = true;
  json props = json::array();
  for (const PropertyOutcome& p : outcomes) {
    json pj;
    pj["name"] = p.name;
    pj["pass"] = p.pass;
    pj["detail"] = p.detail;
    props.push_back(pj);
    all_pass = all_pass && p.pass;
    if (!p.pass && !p.replay.is_null()) {
      std::string file = p.name;
      for (char& ch : file)
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
      const fs::path replay_path = opt.out_dir / ("replay_" + file + ".json");
      io::write_json_file(replay_path, p.replay);
      log_note(opt, "property failed: " + p.name + ", replay case at " +
                        replay_path.string());
    }
  }

  json report;
  report["schema_version"] = io::kSchemaVersion;
  report["type"] = "verify_report";
  report["seed"] = seed;
  report["inject_invalid_generator"] = inject;
  report["properties"] = props;
  report["all_pass"] = all_pass;
  const fs::path report_path = opt.out_dir / "verify.json";
  io::write_json_file(report_path, report);

  json summary;
  summary["command"] = "verify";
  summary["status"] = all_pass ? "ok" : "property_failure";
  summary["all_pass"] = all_pass;
  summary["report"] = report_path.string();
  emit_summary(summary);
  return all_pass ? 0 : 1;
}

}  // namespace

int cmd_simulate(const CommonOptions& opt) {
  return run_guarded(opt, "simulate", simulate_body);
}
int cmd_scan(const CommonOptions& opt) {
  return run_guarded(opt, "scan", scan_body);
}
int cmd_fit(const CommonOptions& opt) { return run_guarded(opt, "fit", fit_body); }
int cmd_closure(const CommonOptions& opt) {
  return run_guarded(opt, "closure", closure_body);
}
int cmd_bounds(const CommonOptions& opt) {
  return run_guarded(opt, "bounds", bounds_body);
}
int cmd_verify(const CommonOptions& opt) {
  return run_guarded(opt, "verify", verify_body);
}

}  // namespace qclock::cli
