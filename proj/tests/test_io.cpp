#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "qclock/io.hpp"
#include "test_support.hpp"

using namespace qclock;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qclock_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("generator JSON round trip") {
  SplitMix64 rng(1);
  const ComplexMatrix h = qclock::testing::random_hermitian(rng, 3);
  std::vector<ComplexMatrix> jumps{qclock::testing::random_matrix(rng, 3),
                                   qclock::testing::random_matrix(rng, 3)};
  const LindbladGenerator gen(h, jumps);
  const nlohmann::json j = io::generator_to_json(gen);
  CHECK(j["schema_version"] == 1);
  const LindbladGenerator back = io::generator_from_json(j);
  CHECK((back.hamiltonian() - gen.hamiltonian()).max_norm() == 0.0);
  REQUIRE(back.jumps().size() == 2);
  for (std::size_t a = 0; a < 2; ++a)
    CHECK((back.jumps()[a] - gen.jumps()[a]).max_norm() == 0.0);
}

TEST_CASE("model JSON round trip") {
  SplitMix64 rng(2);
  const StableBasisModel model = qclock::testing::random_model(rng, 4, 3);
  const StableBasisModel back = io::model_from_json(io::model_to_json(model));
  CHECK(back.dim() == model.dim());
  for (std::size_t m = 0; m < 4; ++m)
    CHECK(back.energies()[m] == model.energies()[m]);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t m = 0; m < 4; ++m)
      CHECK(back.jump_eigenvalues()[a][m] == model.jump_eigenvalues()[a][m]);
}

TEST_CASE("schema violations carry a field path") {
  nlohmann::json j;
  j["dim"] = 2;
  j["energies"] = {0.0};  // wrong length
  try {
    io::model_from_json(j, "model");
    FAIL("expected ConfigError");
  } catch (const io::ConfigError& e) {
    CHECK(e.field_path() == std::string("model.energies"));
  }

  nlohmann::json g;
  g["dim"] = 2;
  g["hamiltonian"] = nlohmann::json::array();
  try {
    io::generator_from_json(g, "generator");
    FAIL("expected ConfigError");
  } catch (const io::ConfigError& e) {
    CHECK(e.field_path().find("hamiltonian") != std::string::npos);
  }
}

TEST_CASE("ramsey config parsing validates physics fields") {
  nlohmann::json j;
  j["tau_s"] = 1e-6;
  j["free_time_s"] = 1.0;
  j["omega_rabi_rad_s"] = 1e6;
  const RamseyConfig cfg = io::ramsey_config_from_json(j);
  CHECK(cfg.delta_omega == 0.0);
  CHECK(cfg.second_pulse_start() == doctest::Approx(1.0 + 1e-6));

  j["tau_s"] = -1.0;
  CHECK_THROWS_AS(io::ramsey_config_from_json(j), io::ConfigError);
}

TEST_CASE("scan CSV round trip (bitwise)") {
  TempDir tmp;
  FringeScan scan;
  scan.ramsey_time = 1.0;
  for (int i = 0; i < 57; ++i) {
    scan.omegas.push_back(-3.0 + 0.1 * i);
    scan.pe.push_back(0.5 * (1.0 + std::sin(0.3 * i)) * 0.999);
  }
  const fs::path csv = tmp.path / "scan.csv";
  io::write_scan_csv(csv, scan);
  const FringeScan back = io::read_scan_csv(csv);
  REQUIRE(back.omegas.size() == scan.omegas.size());
  for (std::size_t i = 0; i < scan.omegas.size(); ++i) {
    CHECK(back.omegas[i] == scan.omegas[i]);
    CHECK(back.pe[i] == scan.pe[i]);
  }
}

TEST_CASE("scan CSV rejects malformed input") {
  TempDir tmp;
  const fs::path bad = tmp.path / "bad.csv";
  {
    std::ofstream out(bad);
    out << "omega,wrong_header\n0,0.5\n";
  }
  CHECK_THROWS_AS(io::read_scan_csv(bad), io::ConfigError);
}

TEST_CASE("written JSON files parse back") {
  TempDir tmp;
  nlohmann::json j;
  j["a"] = 1.5;
  j["nested"] = {{"b", "text"}};
  const fs::path p = tmp.path / "x.json";
  io::write_json_file(p, j);
  CHECK(io::load_json_file(p) == j);
  CHECK_THROWS_AS(io::load_json_file(tmp.path / "missing.json"),
                  io::ConfigError);
}
