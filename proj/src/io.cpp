#include "qclock/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qclock::io {

namespace {

std::string join(const std::string& a, const std::string& b) {
  return a.empty() ? b : a + "." + b;
}

}  // namespace

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), std::string("JSON parse error: ") +
                                         e.what());
  }
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path, "expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Complex& z : m.entries()) arr.push_back(complex_to_json(z));
  return arr;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t dim,
                               const std::string& path) {
  if (!j.is_array() || j.size() != dim * dim)
    throw ConfigError(path, "expected " + std::to_string(dim * dim) +
                                " row-major [re, im] entries");
  std::vector<Complex> entries;
  entries.reserve(dim * dim);
  for (std::size_t i = 0; i < j.size(); ++i)
    entries.push_back(
        complex_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return ComplexMatrix(dim, std::move(entries));
}

double require_number(const nlohmann::json& j, const std::string& key,
                      const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing field");
  if (!j[key].is_number())
    throw ConfigError(join(path, key), "expected a number");
  return j[key].get<double>();
}

double optional_number(const nlohmann::json& j, const std::string& key,
                       const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError(join(path, key), "expected a number");
  return j[key].get<double>();
}

std::int64_t require_int(const nlohmann::json& j, const std::string& key,
                         const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing field");
  if (!j[key].is_number_integer())
    throw ConfigError(join(path, key), "expected an integer");
  return j[key].get<std::int64_t>();
}

const nlohmann::json& require_object(const nlohmann::json& j,
                                     const std::string& key,
                                     const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing field");
  if (!j[key].is_object())
    throw ConfigError(join(path, key), "expected an object");
  return j[key];
}

nlohmann::json generator_to_json(const LindbladGenerator& gen) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = gen.dim();
  j["hamiltonian"] = matrix_to_json(gen.hamiltonian());
  nlohmann::json jumps = nlohmann::json::array();
  for (const auto& l : gen.jumps()) jumps.push_back(matrix_to_json(l));
  j["jumps"] = jumps;
  return j;
}

LindbladGenerator generator_from_json(const nlohmann::json& j,
                                      const std::string& path) {
  const std::int64_t dim = require_int(j, "dim", path);
  if (dim < 1 || dim > 64) throw ConfigError(join(path, "dim"), "out of range");
  const std::size_t d = std::size_t(dim);
  if (!j.contains("hamiltonian"))
    throw ConfigError(join(path, "hamiltonian"), "missing field");
  ComplexMatrix h =
      matrix_from_json(j["hamiltonian"], d, join(path, "hamiltonian"));
  std::vector<ComplexMatrix> jumps;
  if (j.contains("jumps")) {
    if (!j["jumps"].is_array())
      throw ConfigError(join(path, "jumps"), "expected an array");
    for (std::size_t a = 0; a < j["jumps"].size(); ++a)
      jumps.push_back(matrix_from_json(
          j["jumps"][a], d, join(path, "jumps[" + std::to_string(a) + "]")));
  }
  try {
    return LindbladGenerator(std::move(h), std::move(jumps));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

nlohmann::json model_to_json(const StableBasisModel& model) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = model.dim();
  j["energies"] = model.energies();
  nlohmann::json ell = nlohmann::json::array();
  for (const auto& row : model.jump_eigenvalues()) {
    nlohmann::json r = nlohmann::json::array();
    for (const Complex& z : row) r.push_back(complex_to_json(z));
    ell.push_back(r);
  }
  j["jump_eigenvalues"] = ell;
  return j;
}

StableBasisModel model_from_json(const nlohmann::json& j,
                                 const std::string& path) {
  const std::int64_t dim = require_int(j, "dim", path);
  if (dim < 1 || dim > 64) throw ConfigError(join(path, "dim"), "out of range");
  const std::size_t d = std::size_t(dim);
  if (!j.contains("energies") || !j["energies"].is_array() ||
      j["energies"].size() != d)
    throw ConfigError(join(path, "energies"),
                      "expected an array of " + std::to_string(d) + " numbers");
  std::vector<double> energies;
  for (std::size_t m = 0; m < d; ++m) {
    if (!j["energies"][m].is_number())
      throw ConfigError(join(path, "energies[" + std::to_string(m) + "]"),
                        "expected a number");
    energies.push_back(j["energies"][m].get<double>());
  }
  std::vector<std::vector<Complex>> rows;
  if (j.contains("jump_eigenvalues")) {
    if (!j["jump_eigenvalues"].is_array())
      throw ConfigError(join(path, "jump_eigenvalues"), "expected an array");
    for (std::size_t a = 0; a < j["jump_eigenvalues"].size(); ++a) {
      const auto& row = j["jump_eigenvalues"][a];
      const std::string rpath =
          join(path, "jump_eigenvalues[" + std::to_string(a) + "]");
      if (!row.is_array() || row.size() != d)
        throw ConfigError(rpath, "expected " + std::to_string(d) +
                                     " [re, im] pairs");
      std::vector<Complex> r;
      for (std::size_t m = 0; m < d; ++m)
        r.push_back(
            complex_from_json(row[m], rpath + "[" + std::to_string(m) + "]"));
      rows.push_back(std::move(r));
    }
  }
  try {
    return StableBasisModel(std::move(energies), std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

nlohmann::json ramsey_config_to_json(const RamseyConfig& cfg) {
  nlohmann::json j;
  j["tau_s"] = cfg.tau;
  j["free_time_s"] = cfg.free_time;
  j["omega_rabi_rad_s"] = cfg.omega_rabi;
  j["delta_omega_rad_s"] = cfg.delta_omega;
  j["pulse1_start_s"] = cfg.pulse1_start;
  j["pulse2_start_s"] = cfg.second_pulse_start();
  return j;
}

RamseyConfig ramsey_config_from_json(const nlohmann::json& j,
                                     const std::string& path) {
  RamseyConfig cfg;
  cfg.tau = require_number(j, "tau_s", path);
  cfg.free_time = require_number(j, "free_time_s", path);
  cfg.omega_rabi = require_number(j, "omega_rabi_rad_s", path);
  cfg.delta_omega = optional_number(j, "delta_omega_rad_s", path, 0.0);
  cfg.pulse1_start = optional_number(j, "pulse1_start_s", path, 0.0);
  cfg.pulse2_start = optional_number(j, "pulse2_start_s", path, -1.0);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return cfg;
}

nlohmann::json fringe_params_to_json(const FringeParams& p) {
  nlohmann::json j;
  j["gamma_rad_s"] = p.gamma;
  j["eshift_rad_s"] = p.eshift;
  j["omega_rabi_tau_rad"] = p.omega_rabi_tau;
  return j;
}

FringeParams fringe_params_from_json(const nlohmann::json& j,
                                     const std::string& path) {
  FringeParams p;
  p.gamma = require_number(j, "gamma_rad_s", path);
  p.eshift = require_number(j, "eshift_rad_s", path);
  p.omega_rabi_tau = require_number(j, "omega_rabi_tau_rad", path);
  if (p.gamma < 0.0)
    throw ConfigError(join(path, "gamma_rad_s"), "must be >= 0");
  return p;
}

ClockTransition transition_from_json(const nlohmann::json& j,
                                     const std::string& path) {
  const std::int64_t g = require_int(j, "g_index", path);
  const std::int64_t e = require_int(j, "e_index", path);
  if (g < 0) throw ConfigError(join(path, "g_index"), "must be >= 0");
  if (e < 0) throw ConfigError(join(path, "e_index"), "must be >= 0");
  if (g == e) throw ConfigError(path, "g_index and e_index must differ");
  return ClockTransition{std::size_t(g), std::size_t(e)};
}

nlohmann::json transition_to_json(const ClockTransition& tr) {
  nlohmann::json j;
  j["g_index"] = tr.g_index;
  j["e_index"] = tr.e_index;
  return j;
}

nlohmann::json fit_result_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["gamma_rad_s"] = {{"estimate", fit.gamma}, {"stderr", fit.gamma_stderr}};
  j["eshift_rad_s"] = {{"estimate", fit.eshift}, {"stderr", fit.eshift_stderr}};
  j["amplitude"] = {{"estimate", fit.amplitude},
                    {"stderr", fit.amplitude_stderr}};
  j["residual_rms"] = fit.residual_rms;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["gamma_lower_bound_only"] = fit.gamma_lower_bound_only;
  return j;
}

nlohmann::json closure_report_to_json(const ClosureReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["levels"] = {rep.levels[0], rep.levels[1], rep.levels[2]};
  j["eshift_12_rad_s"] = rep.eshift_12;
  j["eshift_23_rad_s"] = rep.eshift_23;
  j["eshift_31_rad_s"] = rep.eshift_31;
  j["closure_sum_rad_s"] = rep.closure_sum;
  j["energy_closure_rad_s"] = rep.energy_closure;
  return j;
}

void write_scan_csv(const std::filesystem::path& path, const FringeScan& scan) {
  scan.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "omega_offset_rad_s,pe\n";
  char line[80];
  for (std::size_t i = 0; i < scan.omegas.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", scan.omegas[i],
                  scan.pe[i]);
    out << line;
  }
}

FringeScan read_scan_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::string header;
  if (!std::getline(in, header) || header != "omega_offset_rad_s,pe")
    throw ConfigError(path.string(), "bad CSV header, expected "
                                     "'omega_offset_rad_s,pe'");
  FringeScan scan;
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(row),
                        "expected 'omega,pe'");
    try {
      scan.omegas.push_back(std::stod(line.substr(0, comma)));
      scan.pe.push_back(std::stod(line.substr(comma + 1)));
    } catch (...) {
      throw ConfigError(path.string() + ":" + std::to_string(row),
                        "unparseable number");
    }
  }
  try {
    scan.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string(), e.what());
  }
  return scan;
}

nlohmann::json scan_meta_to_json(const FringeScan& scan,
                                 const nlohmann::json& provenance) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "fringe_scan_meta";
  j["points"] = scan.omegas.size();
  j["ramsey_time_s"] = scan.ramsey_time;
  j["measured"] = scan.measured;
  j["provenance"] = provenance;
  return j;
}

}  // namespace qclock::io
