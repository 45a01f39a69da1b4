#pragma once

// `analyze` run: sample a chart metric, evaluate the selected checks at each
// point on a worker pool, and assemble a deterministic report.
//
// Exit codes: 0 all selected checks pass, 2 a verdict is false (including
// errored points), 3 an internal-consistency failure, 1 usage/config error.

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "curv4/models.hpp"

namespace curv4::cli {

enum ExitCode : int { ok = 0, usage_error = 1, verdict_false = 2, inconsistent = 3 };

struct RunConfig {
  // Exactly one metric source.
  std::optional<std::string> builtin;
  Params params;
  std::optional<std::string> config_path;

  std::optional<int> grid;             // points per axis
  std::optional<std::size_t> random;   // random point count
  std::uint64_t seed = 1;

  std::set<std::string> checks = {"spectra", "kperp", "hypotheses"};
  std::optional<double> margin;        // default: 1e-9·max(1, |s|) per point
  int search_samples = 1000;
  double agreement_tolerance = 1e-5;   // closed form vs plane search
  double weitzenboeck_tolerance = 1e-6;
  std::string format = "json";
  std::size_t workers = 0;             // 0: CURV4_WORKERS or hardware concurrency
};

/// Check names accepted in RunConfig::checks.
const std::set<std::string>& known_checks();

struct RunResult {
  int exit_code = ok;
  std::string report;  // JSON or CSV text, newline-terminated
  std::string summary; // one line for the terminal
};

/// Never throws for configuration problems: they produce exit code 1 and a
/// message in `summary`.
RunResult run(const RunConfig& config);

/// Worker count from CURV4_WORKERS, falling back to the hardware.
std::size_t default_workers();

}  // namespace curv4::cli
