#include "xyq/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "xyq/correlators.hpp"
#include "xyq/errors.hpp"
#include "xyq/parallel.hpp"
#include "xyq/rdm.hpp"

namespace xyq {

namespace {

double measure_value(const MeasureResult& m, MeasureId id) {
  switch (id) {
    case MeasureId::qfi: return m.qfi;
    case MeasureId::lqc_x: return m.lqc_x;
    case MeasureId::lqc_y: return m.lqc_y;
    case MeasureId::lqc_z: return m.lqc_z;
  }
  throw compute_error("unknown measure id");
}

double sanitize_value(double v) {
  if (!std::isfinite(v)) throw compute_error("non-finite measure value");
  if (v < -1e-12) throw compute_error("measure value below zero: " + std::to_string(v));
  return std::max(v, 0.0);
}

// snapshot -> records for both separations
void emit_records(std::span<const Mode> modes, std::span<const ModeState> states,
                  const ChainSpec& spec, double tau, double xi, double h, double t,
                  std::span<const MeasureId> measures, std::vector<SweepRecord>& out) {
  const ContractionTable table = contractions(modes, states, h, 2, spec.n_sites);
  const SpinCorrelators corr = spin_correlators(table);
  for (int r = 1; r <= 2; ++r) {
    const TwoSpinRDM rdm = assemble_rdm(corr, r, SnapshotTag{tau, xi, h, t});
    const MeasureResult m = evaluate_measures(rdm);
    for (MeasureId id : measures)
      out.push_back({tau, xi, r, id, h, sanitize_value(measure_value(m, id))});
  }
}

struct LinFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0, std_err = 0.0;
};

LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw compute_error("degenerate abscissa in linear fit");
  LinFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += resid * resid;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.std_err = x.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
  return fit;
}

}  // namespace

std::string to_string(MeasureId id) {
  switch (id) {
    case MeasureId::qfi: return "qfi";
    case MeasureId::lqc_x: return "lqc_x";
    case MeasureId::lqc_y: return "lqc_y";
    case MeasureId::lqc_z: return "lqc_z";
  }
  return "?";
}

MeasureId parse_measure(const std::string& name) {
  if (name == "qfi") return MeasureId::qfi;
  if (name == "lqc_x") return MeasureId::lqc_x;
  if (name == "lqc_y") return MeasureId::lqc_y;
  if (name == "lqc_z") return MeasureId::lqc_z;
  throw config_error("unknown measure '" + name + "'");
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw config_error("log_grid requires 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> lin_grid(double lo, double hi, int count) {
  if (!(hi > lo) || count < 2) throw config_error("lin_grid requires lo < hi, count >= 2");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  g.back() = hi;
  return g;
}

std::vector<SweepRecord> field_sweep(const ChainSpec& spec, double tau, double xi,
                                     std::span<const MeasureId> measures,
                                     std::span<const double> h_grid,
                                     const IntegratorConfig& cfg) {
  spec.validate();
  RampProtocol protocol{tau, xi, spec.h_initial, spec.h_final};
  protocol.validate();
  std::vector<double> checkpoints;
  checkpoints.reserve(h_grid.size());
  for (double h : h_grid) {
    if (h < spec.h_initial || h > spec.h_final)
      throw config_error("field grid point outside [h_i, h_f]");
    checkpoints.push_back(h * tau);
  }
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw config_error("field grid must be sorted increasing");

  const std::vector<Mode> modes = momentum_grid(spec);
  const auto snapshots = evolve_chain(spec, protocol, cfg, checkpoints);

  std::vector<SweepRecord> records;
  records.reserve(h_grid.size() * measures.size() * 2);
  for (std::size_t ci = 0; ci < h_grid.size(); ++ci)
    emit_records(modes, snapshots[ci], spec, tau, xi, h_grid[ci], checkpoints[ci],
                 measures, records);
  return records;
}

std::vector<SweepRecord> static_reference(const ChainSpec& spec,
                                          std::span<const double> h_grid,
                                          std::span<const MeasureId> measures) {
  spec.validate();
  const std::vector<Mode> modes = momentum_grid(spec);
  std::vector<SweepRecord> records;
  const double inf = std::numeric_limits<double>::infinity();
  for (double h : h_grid) {
    std::vector<ModeState> ground(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const ModeEigensystem sys = instantaneous_eigensystem(modes[i], h);
      ground[i].rho = sys.ground * sys.ground.adjoint();
      ground[i].t = 0.0;
      ground[i].u_abs2 = 0.0;
      ground[i].vu_conj = {0.0, 0.0};
    }
    emit_records(modes, ground, spec, inf, 0.0, h, 0.0, measures, records);
  }
  return records;
}

std::vector<SweepRecord> tau_sweep(const ChainSpec& spec, double xi,
                                   std::span<const double> tau_grid,
                                   std::span<const MeasureId> measures,
                                   const IntegratorConfig& cfg) {
  spec.validate();
  if (!std::is_sorted(tau_grid.begin(), tau_grid.end()))
    throw config_error("tau grid must be sorted increasing");
  const std::vector<Mode> modes = momentum_grid(spec);

  // modes are the wide axis; evolve_chain parallelizes over them per tau
  std::vector<SweepRecord> records;
  for (double tau : tau_grid) {
    RampProtocol protocol{tau, xi, spec.h_initial, spec.h_final};
    protocol.validate();
    const std::array<double, 1> endpoint{protocol.t_end()};
    const auto snapshots = evolve_chain(spec, protocol, cfg, endpoint);
    emit_records(modes, snapshots[0], spec, tau, xi, spec.h_final, endpoint[0],
                 measures, records);
  }
  return records;
}

std::vector<SweepRecord> filter_series(std::span<const SweepRecord> records,
                                       MeasureId measure, int r, double xi) {
  std::vector<SweepRecord> series;
  for (const SweepRecord& rec : records)
    if (rec.measure == measure && rec.r == r && rec.xi == xi) series.push_back(rec);
  std::sort(series.begin(), series.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.tau < b.tau; });
  return series;
}

FitResult locate_peak(std::span<const SweepRecord> series) {
  if (series.size() < 5)
    throw compute_error("locate_peak needs at least 5 grid points");
  std::size_t imax = 0;
  for (std::size_t i = 1; i < series.size(); ++i)
    if (series[i].value > series[imax].value) imax = i;
  if (imax == 0 || imax + 1 == series.size())
    throw compute_error("maximum at grid boundary; widen the tau grid");

  // parabola through the three points in (ln tau, value)
  const double x1 = std::log(series[imax - 1].tau), x2 = std::log(series[imax].tau),
               x3 = std::log(series[imax + 1].tau);
  const double v1 = series[imax - 1].value, v2 = series[imax].value,
               v3 = series[imax + 1].value;
  const double d21 = x2 - x1, d23 = x2 - x3;
  const double num = d21 * d21 * (v2 - v3) - d23 * d23 * (v2 - v1);
  const double den = d21 * (v2 - v3) - d23 * (v2 - v1);
  FitResult fit;
  fit.kind = FitResult::Kind::peak;
  fit.tau_m = (std::abs(den) < 1e-300) ? series[imax].tau
                                       : std::exp(x2 - 0.5 * num / den);
  fit.r_squared = 1.0;  // exact interpolation through 3 points
  fit.window_lo = series[imax - 1].tau;
  fit.window_hi = series[imax + 1].tau;
  return fit;
}

FitResult fit_exp_decay(std::span<const SweepRecord> series, double window_lo,
                        double window_hi) {
  std::vector<double> xs, ys;
  for (const SweepRecord& rec : series) {
    if (rec.tau <= window_lo || rec.tau > window_hi) continue;
    if (!(rec.value > 0.0))
      throw compute_error("nonpositive value in exp-decay window at tau = " +
                          std::to_string(rec.tau));
    xs.push_back(rec.tau);
    ys.push_back(std::log(rec.value));
  }
  if (xs.size() < 2) throw compute_error("exp-decay window contains < 2 points");
  const LinFit lin = linear_fit(xs, ys);
  FitResult fit;
  fit.kind = FitResult::Kind::exp_decay;
  fit.slope = lin.slope;
  fit.intercept = lin.intercept;
  fit.r_squared = lin.r_squared;
  fit.std_err = lin.std_err;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  return fit;
}

FitResult fit_tau_power_law(std::span<const SweepRecord> series, double window_lo,
                            double window_hi) {
  std::vector<double> xs, ys;
  for (const SweepRecord& rec : series) {
    if (rec.tau <= window_lo || rec.tau > window_hi) continue;
    if (!(rec.value > 0.0))
      throw compute_error("nonpositive value in power-law window at tau = " +
                          std::to_string(rec.tau));
    xs.push_back(std::log(rec.tau));
    ys.push_back(std::log(rec.value));
  }
  if (xs.size() < 2) throw compute_error("power-law window contains < 2 points");
  const LinFit lin = linear_fit(xs, ys);
  FitResult fit;
  fit.kind = FitResult::Kind::power_law;
  fit.slope = lin.slope;
  fit.intercept = lin.intercept;
  fit.r_squared = lin.r_squared;
  fit.std_err = lin.std_err;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  return fit;
}

FitResult fit_power_law(std::span<const std::pair<double, double>> xi_tau_m) {
  if (xi_tau_m.size() < 4)
    throw compute_error("power-law fit needs at least 4 (xi, tau_m) pairs");
  std::vector<double> xs, ys;
  for (const auto& [xi, tau_m] : xi_tau_m) {
    if (!(xi > 0.0) || !(tau_m > 0.0))
      throw compute_error("power-law fit requires positive xi and tau_m");
    xs.push_back(std::log(xi * xi));
    ys.push_back(std::log(tau_m));
  }
  const LinFit lin = linear_fit(xs, ys);
  FitResult fit;
  fit.kind = FitResult::Kind::power_law;
  fit.slope = -lin.slope;  // delta
  fit.intercept = lin.intercept;
  fit.r_squared = lin.r_squared;
  fit.std_err = lin.std_err;
  fit.window_lo = xi_tau_m.front().first;
  fit.window_hi = xi_tau_m.back().first;
  return fit;
}

}  // namespace xyq
