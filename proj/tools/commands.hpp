#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace qclock::cli {

struct CommonOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  bool quiet = false;
};

// Exit codes: 0 success, 1 property/fit failure, 2 input error.
int cmd_simulate(const CommonOptions& opt);
int cmd_scan(const CommonOptions& opt);
int cmd_fit(const CommonOptions& opt);
int cmd_closure(const CommonOptions& opt);
int cmd_bounds(const CommonOptions& opt);
int cmd_verify(const CommonOptions& opt);  // config optional

}  // namespace qclock::cli
