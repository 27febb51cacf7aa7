#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gsieve/cli/config.hpp"

namespace gsieve::cli {

enum class Command { evolve, sieve, scan, coeffs };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPhysicsError = 3;

// Agreement thresholds reported by `sieve` and `scan`.
inline constexpr double kKernelRouteRelTol = 1e-10;
inline constexpr double kNumericAlephTol = 1e-6;

struct RunOptions {
  unsigned threads = 0;  // scan workers; 0 = hardware concurrency
};

struct Rendered {
  std::string text;                   // output document
  std::vector<std::string> warnings;  // also embedded in JSON diagnostics
};

// Each renderer validates the config, runs the computation and formats the
// output document. ConfigError and gsieve::Error propagate.
Rendered render_evolve(const ScenarioConfig& config);
Rendered render_sieve(const ScenarioConfig& config);
Rendered render_scan(const ScenarioConfig& config, const RunOptions& options = {});
Rendered render_coeffs(const ScenarioConfig& config);

Rendered render(Command command, const ScenarioConfig& config, const RunOptions& options = {});

// Renders, writes to config.output.path (stdout for "" or "-") and maps
// failures onto the exit-code contract. Diagnostics go to `err`.
int execute(Command command, const ScenarioConfig& config, std::ostream& out, std::ostream& err,
            const RunOptions& options = {});

}  // namespace gsieve::cli
