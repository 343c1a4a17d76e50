#include "xyq/evolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "xyq/errors.hpp"
#include "xyq/parallel.hpp"

namespace xyq {

namespace {

constexpr double kPositivityTol = 1e-7;

// Bloch 4-vector (x, y, z, w): rho = (w I + x sx + y sy + z sz)/2.
using Bloch = std::array<double, 4>;

Bloch to_bloch(const Eigen::Matrix2cd& rho) {
  Bloch b;
  b[0] = 2.0 * rho(0, 1).real();
  b[1] = -2.0 * rho(0, 1).imag();
  b[2] = (rho(0, 0) - rho(1, 1)).real();
  b[3] = (rho(0, 0) + rho(1, 1)).real();
  return b;
}

Eigen::Matrix2cd from_bloch(const Bloch& b) {
  Eigen::Matrix2cd rho;
  rho(0, 0) = 0.5 * (b[3] + b[2]);
  rho(1, 1) = 0.5 * (b[3] - b[2]);
  rho(0, 1) = 0.5 * std::complex<double>(b[0], -b[1]);
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

// Pair generator -(h_k sz + Delta sy) plus sigma^z dephasing at rate 2 xi^2:
//   x' =  2 h_k y - 2 Delta z - 2 xi^2 x
//   y' = -2 h_k x            - 2 xi^2 y
//   z' =  2 Delta x
struct ModeRhs {
  double cos_k;
  double delta;
  double inv_tau;
  double dephase;  // 2 xi^2

  void operator()(double t, const Bloch& y, Bloch& dy) const {
    const double hk = t * inv_tau - cos_k;
    dy[0] = 2.0 * hk * y[1] - 2.0 * delta * y[2] - dephase * y[0];
    dy[1] = -2.0 * hk * y[0] - dephase * y[1];
    dy[2] = 2.0 * delta * y[0];
    dy[3] = 0.0;
  }
};

// Dormand-Prince 5(4) embedded pair, FSAL.
void integrate_adaptive(const ModeRhs& rhs, Bloch& y, double t0, double t1,
                        const IntegratorConfig& cfg, double max_step) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  double t = t0;
  double h = std::min(max_step, t1 - t0);
  const double t_eps = 1e-12 * std::max(1.0, std::abs(t1));
  Bloch k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  rhs(t, y, k1);  // FSAL: k1 stays valid across rejected steps

  while (t1 - t > t_eps) {
    h = std::min(h, t1 - t);
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw compute_error("integrator step size underflow at t = " + std::to_string(t));

    for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (int i = 0; i < 4; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (int i = 0; i < 4; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (int i = 0; i < 4; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (int i = 0; i < 4; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    rhs(t + h, ynew, k7);

    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double scale =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(ei) / scale);
    }

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;
    }
    const double factor =
        std::clamp(0.85 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h = std::min(h * factor, max_step);
  }
}

void integrate_rk4(const ModeRhs& rhs, Bloch& y, double t0, double t1, double step) {
  double t = t0;
  Bloch k1, k2, k3, k4, ytmp;
  while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
    const double h = std::min(step, t1 - t);
    rhs(t, y, k1);
    for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, ytmp, k2);
    for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, ytmp, k3);
    for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + h * k3[i];
    rhs(t + h, ytmp, k4);
    for (int i = 0; i < 4; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw config_error("integrator tolerances must be positive");
  if (max_step < 0.0) throw config_error("max_step must be nonnegative");
  if (method == Method::fixed_rk4 && !(fixed_step > 0.0))
    throw config_error("fixed_step must be positive");
}

double IntegratorConfig::resolved_max_step(double tau) const {
  return max_step > 0.0 ? max_step : 0.1 * std::min(1.0, tau);
}

ModeState initial_state(const Mode& mode, const RampProtocol& protocol) {
  const ModeEigensystem sys = instantaneous_eigensystem(mode, protocol.h_initial);
  ModeState state;
  state.rho = sys.ground * sys.ground.adjoint();
  state.t = protocol.t_start();
  state.u_abs2 = 0.0;
  state.vu_conj = {0.0, 0.0};
  return state;
}

std::pair<double, std::complex<double>> extract_amplitudes(const Eigen::Matrix2cd& rho,
                                                           const Mode& mode, double h) {
  const ModeEigensystem sys = instantaneous_eigensystem(mode, h);
  const double u_abs2 = (sys.excited.adjoint() * rho * sys.excited)(0, 0).real();
  const std::complex<double> vu = (sys.ground.adjoint() * rho * sys.excited)(0, 0);
  return {u_abs2, vu};
}

ModeState evolve_mode(const ModeState& state, const Mode& mode,
                      const RampProtocol& protocol, const IntegratorConfig& cfg,
                      double t_target) {
  cfg.validate();
  const double slack = 1e-9 * std::max(1.0, std::abs(t_target));
  if (t_target < state.t - slack)
    throw compute_error("evolve_mode: t_target precedes current state time");
  if (t_target > protocol.t_end() + slack)
    throw compute_error("evolve_mode: t_target beyond protocol end");

  Bloch y = to_bloch(state.rho);
  const double r0 = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
  if (t_target > state.t) {
    ModeRhs rhs{-mode.h_offset, mode.delta, 1.0 / protocol.tau,
                2.0 * protocol.xi * protocol.xi};
    if (cfg.method == IntegratorConfig::Method::adaptive)
      integrate_adaptive(rhs, y, state.t, t_target, cfg,
                         cfg.resolved_max_step(protocol.tau));
    else
      integrate_rk4(rhs, y, state.t, t_target, cfg.fixed_step);
    if (protocol.xi == 0.0 && r0 > 1e-12) {
      // noiseless evolution conserves |r| exactly; project out truncation drift
      const double rn = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
      if (rn > 1e-300)
        for (int i = 0; i < 3; ++i) y[i] *= r0 / rn;
    }
  }

  const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
  // smallest eigenvalue of rho is (w - |r|)/2
  if (std::sqrt(r2) > y[3] + 2.0 * kPositivityTol)
    throw compute_error("mode density matrix lost positivity beyond 1e-7 at k = " +
                        std::to_string(mode.k));

  ModeState out;
  out.rho = from_bloch(y);
  out.t = t_target;
  auto [u2, vu] = extract_amplitudes(out.rho, mode, protocol.field(t_target));
  out.u_abs2 = u2;
  out.vu_conj = vu;
  return out;
}

std::vector<std::vector<ModeState>> evolve_chain(const ChainSpec& spec,
                                                 const RampProtocol& protocol,
                                                 const IntegratorConfig& cfg,
                                                 std::span<const double> checkpoints) {
  protocol.validate();
  cfg.validate();
  const double slack = 1e-9 * std::max(1.0, std::abs(protocol.t_end()));
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (i > 0 && checkpoints[i] < checkpoints[i - 1])
      throw config_error("checkpoints must be sorted");
    if (checkpoints[i] < protocol.t_start() - slack ||
        checkpoints[i] > protocol.t_end() + slack)
      throw config_error("checkpoint outside [t_start, t_end]");
  }

  const std::vector<Mode> modes = momentum_grid(spec);
  std::vector<std::vector<ModeState>> result(
      checkpoints.size(), std::vector<ModeState>(modes.size()));

  parallel_for(modes.size(), [&](std::size_t mi) {
    try {
      ModeState state = initial_state(modes[mi], protocol);
      for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
        state = evolve_mode(state, modes[mi], protocol, cfg,
                            std::max(checkpoints[ci], state.t));
        result[ci][mi] = state;
      }
    } catch (const compute_error& e) {
      throw compute_error("mode k = " + std::to_string(modes[mi].k) + ": " + e.what());
    }
  });
  return result;
}

}  // namespace xyq
