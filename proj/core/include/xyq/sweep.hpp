#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xyq/chain.hpp"
#include "xyq/evolve.hpp"
#include "xyq/measures.hpp"

namespace xyq {

enum class MeasureId { qfi, lqc_x, lqc_y, lqc_z };

std::string to_string(MeasureId id);
MeasureId parse_measure(const std::string& name);  // throws config_error

// One (tau, xi, r, measure, h) result row; the unit of persistence and fitting.
// Static-reference rows carry tau = +infinity.
struct SweepRecord {
  double tau = 0.0;
  double xi = 0.0;
  int r = 1;
  MeasureId measure = MeasureId::qfi;
  double h = 0.0;
  double value = 0.0;
};

struct FitResult {
  enum class Kind { exp_decay, power_law, peak };
  Kind kind = Kind::peak;
  double slope = 0.0;      // decay slope of ln(value) vs tau, or power-law exponent delta
  double intercept = 0.0;
  double tau_m = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  double std_err = 0.0;  // standard error of the slope/exponent
};

std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> lin_grid(double lo, double hi, int count);

// One chain evolution with checkpoints at t = h*tau for every grid field;
// measures evaluated at each checkpoint for r = 1, 2.
std::vector<SweepRecord> field_sweep(const ChainSpec& spec, double tau, double xi,
                                     std::span<const MeasureId> measures,
                                     std::span<const double> h_grid,
                                     const IntegratorConfig& cfg = {});

// Measures on the instantaneous ground state at each grid field.
std::vector<SweepRecord> static_reference(const ChainSpec& spec,
                                          std::span<const double> h_grid,
                                          std::span<const MeasureId> measures);

// Full ramps evaluated at h_f, one per tau; independent across tau.
std::vector<SweepRecord> tau_sweep(const ChainSpec& spec, double xi,
                                   std::span<const double> tau_grid,
                                   std::span<const MeasureId> measures,
                                   const IntegratorConfig& cfg = {});

// Selects one (measure, r, xi) series from a record set, sorted by tau.
std::vector<SweepRecord> filter_series(std::span<const SweepRecord> records,
                                       MeasureId measure, int r, double xi);

// tau_m from a 3-point parabola in (ln tau, value) around the discrete
// maximum. Throws compute_error for a boundary maximum or < 5 points.
FitResult locate_peak(std::span<const SweepRecord> series);

// Least-squares line on (tau, ln value) within (window_lo, window_hi].
// Throws compute_error on nonpositive values in the window.
FitResult fit_exp_decay(std::span<const SweepRecord> series, double window_lo,
                        double window_hi);

// Diagnostic companion to fit_exp_decay: least-squares line on
// (ln tau, ln value) over the same window; slope is the ln-ln exponent.
FitResult fit_tau_power_law(std::span<const SweepRecord> series, double window_lo,
                            double window_hi);

// Least-squares line on (ln xi^2, ln tau_m); exponent delta = -slope.
// Requires at least 4 points.
FitResult fit_power_law(std::span<const std::pair<double, double>> xi_tau_m);

}  // namespace xyq
