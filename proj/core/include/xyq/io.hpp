#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xyq/sweep.hpp"

namespace xyq {

inline constexpr const char* kArtifactVersion = "xyq 0.1.0";

// One entry of the fit summary; xi is empty for cross-xi (power-law) fits.
struct FitSummaryEntry {
  FitResult fit;
  std::string measure;
  int r = 0;
  std::optional<double> xi;
};

// Records are sorted by (measure, r, xi, tau, h) and written atomically
// (temp file + rename) with '#'-prefixed provenance lines:
//   tau,xi,r,measure,h,value
void write_records_csv(const std::string& path, std::vector<SweepRecord> records,
                       const std::string& provenance);

// JSON array of {kind, slope_or_exponent, intercept, tau_m, r_squared,
// window_lo, window_hi} objects plus identifying keys; atomic write.
void write_fits_json(const std::string& path, std::span<const FitSummaryEntry> fits,
                     const std::string& provenance);

std::string format_record_csv(const SweepRecord& rec);

}  // namespace xyq
