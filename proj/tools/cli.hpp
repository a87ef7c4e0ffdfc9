#pragma once

// The `arw` command line: subcommands lattice, predict, simulate, verify and
// probe. Kept in a library so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace arw::cli {

enum ExitCode : int { kOk = 0, kNumericFailure = 1, kUsageError = 2 };

struct ExperimentConfig {
  std::string command;
  std::int64_t m = 0;
  std::string curve;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  double oversample = 8.0;
  int quad_order = 0;          // nodes per axis, 0 = automatic
  std::string format = "json"; // json | csv
  std::string output;          // empty = stdout
  unsigned threads = 0;        // 0 = machine parallelism
  bool no_meta = false;
  std::string per_trial;       // simulate: per-trial CSV path
  std::int64_t m_max = 200;    // verify
  double divisor_cap = 0.0;    // lattice: 0 = sqrt(m)
  std::optional<double> t1;    // probe: default (L - z_max)/2
  std::optional<double> z_min; // probe: default 1e-3/sqrt(m)
  std::optional<double> z_max; // probe: default 1e-2/sqrt(m)
  int z_count = 11;
};

nlohmann::json config_to_json(const ExperimentConfig& c);

/// Parses argv-style arguments (without the program name), runs the command
/// and writes the report to `out` (or to the --output file). Diagnostics go
/// to `err`. Returns 0, 1 (numeric failure) or 2 (usage or parse error).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arw::cli
