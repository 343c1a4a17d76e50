#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xyq/sweep.hpp"

namespace xyq {

enum class Subcommand { field_sweep, tau_sweep, scaling, validate, static_ref };

std::string to_string(Subcommand cmd);

struct HGridSpec {
  double lo = -2.0, hi = 2.0;
  int count = 81;
};

// Fully resolved run configuration. Defaults follow the reference setup:
// N = 200, gamma = 1, ramp -30 -> 30.
struct RunConfig {
  Subcommand cmd = Subcommand::field_sweep;

  int n_sites = 200;
  double gamma = 1.0;
  double h_initial = -30.0;
  double h_final = 30.0;

  std::vector<double> tau_list;
  std::vector<double> xi_list;
  std::vector<int> r_list{1, 2};
  std::vector<MeasureId> measures{MeasureId::qfi, MeasureId::lqc_x,
                                  MeasureId::lqc_y, MeasureId::lqc_z};
  HGridSpec h_grid;

  std::string out_dir;

  double rel_tol = 1e-9;
  double abs_tol = 1e-11;

  // oracle options
  int n_oracle = 8;
  int trajectories = 2000;
  std::uint64_t seed = 12345;
  double dt_noise = 0.0;  // 0 = auto
  double dt_prop = 0.0;   // 0 = auto

  // fit window override; 0 = auto (2*tau_m .. tau_max)
  double fit_window_lo = 0.0;
  double fit_window_hi = 0.0;

  bool synthetic = false;  // scaling: run the fit machinery on synthetic data

  ChainSpec chain() const;
  RampProtocol protocol(double tau, double xi) const;
  IntegratorConfig integrator() const;

  void validate() const;  // throws config_error
};

// Applies one `key = value` setting; throws config_error on unknown keys or
// malformed values.
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat key=value file with '#' comments; command-line flags override it.
void apply_config_file(RunConfig& cfg, const std::string& path);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<MeasureId> parse_measure_list(const std::string& text);
HGridSpec parse_h_grid(const std::string& text);  // "min:max:count"

// Resolved configuration as `key = value` lines for provenance headers.
std::string resolved_config_text(const RunConfig& cfg);

}  // namespace xyq
