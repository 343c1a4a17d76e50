#include "xyq/chain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "xyq/errors.hpp"

namespace xyq {

using std::numbers::pi;
static const std::complex<double> kI(0.0, 1.0);

void ChainSpec::validate() const {
  if (n_sites < 4 || n_sites % 2 != 0)
    throw config_error("n_sites must be even and >= 4, got " + std::to_string(n_sites));
  if (!std::isfinite(gamma)) throw config_error("gamma must be finite");
  if (!std::isfinite(h_initial) || !std::isfinite(h_final))
    throw config_error("h_initial/h_final must be finite");
}

void RampProtocol::validate() const {
  if (!(tau > 0.0)) throw config_error("tau must be positive");
  if (xi < 0.0) throw config_error("xi must be nonnegative");
  if (!(h_final > h_initial)) throw config_error("ramp requires h_final > h_initial");
}

std::vector<Mode> momentum_grid(const ChainSpec& spec) {
  spec.validate();
  std::vector<Mode> modes;
  modes.reserve(spec.n_sites / 2);
  for (int m = 1; m <= spec.n_sites / 2; ++m) {
    Mode mode;
    mode.k = (2.0 * m - 1.0) * pi / spec.n_sites;
    mode.h_offset = -std::cos(mode.k);
    mode.delta = spec.gamma * std::sin(mode.k);
    modes.push_back(mode);
  }
  return modes;
}

Eigen::Matrix2cd bloch_hamiltonian(const Mode& mode, double h) {
  const double hk = mode.field(h);
  Eigen::Matrix2cd m;
  m << hk, -kI * mode.delta, kI * mode.delta, -hk;
  return m;
}

Eigen::Matrix2cd pair_hamiltonian(const Mode& mode, double h) {
  return -bloch_hamiltonian(mode, h);
}

BlochAngle bogoliubov_angle(const Mode& mode, double h) {
  const double hk = mode.field(h);
  BlochAngle angle;
  angle.epsilon = std::hypot(hk, mode.delta);
  angle.theta = std::atan2(mode.delta, hk);
  return angle;
}

ModeEigensystem instantaneous_eigensystem(const Mode& mode, double h) {
  ModeEigensystem sys;
  sys.angle = bogoliubov_angle(mode, h);
  if (sys.angle.epsilon == 0.0)
    throw compute_error("degenerate mode: h_k = Delta_k = 0 at k = " +
                        std::to_string(mode.k));
  const double c = std::cos(0.5 * sys.angle.theta);
  const double s = std::sin(0.5 * sys.angle.theta);
  sys.ground << c, kI * s;
  sys.excited << kI * s, c;
  return sys;
}

}  // namespace xyq
