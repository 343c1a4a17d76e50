#pragma once

#include <stdexcept>
#include <string>

namespace xyq {

// Invalid or inconsistent run configuration (CLI exit code 2).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside the simulation pipeline (CLI exit code 3).
struct compute_error : std::runtime_error {
  explicit compute_error(const std::string& what) : std::runtime_error(what) {}
};

// Cross-check against the exact oracle failed (CLI exit code 4).
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace xyq
