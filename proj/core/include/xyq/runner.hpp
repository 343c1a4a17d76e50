#pragma once

#include <string>
#include <vector>

#include "xyq/io.hpp"
#include "xyq/run_config.hpp"

namespace xyq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitComputeError = 3;
inline constexpr int kExitValidationFailure = 4;

struct ScalingOutput {
  std::vector<SweepRecord> records;
  std::vector<FitSummaryEntry> fits;
};

// tau sweeps per xi, peak location, exponential-decay fits, and the
// tau_m vs xi^2 power law. With cfg.synthetic, runs the same fit machinery
// on injected tau_m = (xi^2)^(-2/3) data.
ScalingOutput run_scaling(const RunConfig& cfg);

struct ValidationReport {
  double max_noiseless_dev = 0.0;   // worst RDM-entry deviation, noiseless
  double max_measure_dev = 0.0;     // worst QFI/LQC deviation, noiseless
  double max_noisy_z = 0.0;         // worst |pipeline - mean| / stderr, noisy
  bool noisy_ran = false;
  bool passed = false;
  std::vector<std::string> lines;   // human-readable detail
};

// Momentum pipeline vs exact-diagonalization oracle at small N.
ValidationReport run_validation(const RunConfig& cfg);

// Dispatches a subcommand, writes outputs under cfg.out_dir, and returns a
// process exit code (0 ok, 2 config, 3 compute, 4 validation).
int run(const RunConfig& cfg);

}  // namespace xyq
