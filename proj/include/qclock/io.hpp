#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qclock/fringe.hpp"
#include "qclock/lindblad.hpp"
#include "qclock/ramsey.hpp"

namespace qclock::io {

inline constexpr int kSchemaVersion = 1;

/// Input/schema problem; carries the JSON field path that failed.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), field_path_(path) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

nlohmann::json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j);

// Complex numbers serialize as [re, im]; matrices row-major.
nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t dim,
                               const std::string& path);

// Schemas: fields `dim`, `hamiltonian`, `jumps` for generators and
// `dim`, `energies`, `jump_eigenvalues` for stable-basis models.
nlohmann::json generator_to_json(const LindbladGenerator& gen);
LindbladGenerator generator_from_json(const nlohmann::json& j,
                                      const std::string& path = "generator");
nlohmann::json model_to_json(const StableBasisModel& model);
StableBasisModel model_from_json(const nlohmann::json& j,
                                 const std::string& path = "model");

nlohmann::json ramsey_config_to_json(const RamseyConfig& cfg);
RamseyConfig ramsey_config_from_json(const nlohmann::json& j,
                                     const std::string& path = "ramsey");

nlohmann::json fringe_params_to_json(const FringeParams& p);
FringeParams fringe_params_from_json(const nlohmann::json& j,
                                     const std::string& path = "params");

ClockTransition transition_from_json(const nlohmann::json& j,
                                     const std::string& path = "transition");
nlohmann::json transition_to_json(const ClockTransition& tr);

nlohmann::json fit_result_to_json(const FitResult& fit);
nlohmann::json closure_report_to_json(const ClosureReport& rep);

/// Scan data as CSV (`omega_offset_rad_s,pe`) plus a JSON metadata
/// sidecar.
void write_scan_csv(const std::filesystem::path& path, const FringeScan& scan);
FringeScan read_scan_csv(const std::filesystem::path& path);
nlohmann::json scan_meta_to_json(const FringeScan& scan,
                                 const nlohmann::json& provenance);

// Typed field accessors that throw ConfigError with the field path.
double require_number(const nlohmann::json& j, const std::string& key,
                      const std::string& path);
double optional_number(const nlohmann::json& j, const std::string& key,
                       const std::string& path, double fallback);
std::int64_t require_int(const nlohmann::json& j, const std::string& key,
                         const std::string& path);
const nlohmann::json& require_object(const nlohmann::json& j,
                                     const std::string& key,
                                     const std::string& path);

}  // namespace qclock::io
