#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace xyq {

// Static parameters of the transverse-field XY chain (periodic boundaries,
// even N, antiperiodic momentum sector).
struct ChainSpec {
  int n_sites = 200;
  double gamma = 1.0;
  double h_initial = -30.0;
  double h_final = 30.0;

  void validate() const;  // throws config_error
};

// One positive momentum k = (2m-1)pi/N with its couplings
// h_k(h) = h - cos k and Delta_k = gamma sin k.
struct Mode {
  double k = 0.0;
  double h_offset = 0.0;  // -cos k
  double delta = 0.0;     // gamma sin k

  double field(double h) const { return h + h_offset; }
};

// Instantaneous Bogoliubov angle and quasiparticle energy of a mode.
struct BlochAngle {
  double theta = 0.0;    // atan2(Delta_k, h_k), in [0, pi] for gamma >= 0
  double epsilon = 0.0;  // sqrt(h_k^2 + Delta_k^2)
};

// Linear ramp h0(t) = t/tau over t in [h_i tau, h_f tau], optionally with
// white noise of strength xi on the field (xi^2 carries units of time).
struct RampProtocol {
  double tau = 1.0;
  double xi = 0.0;
  double h_initial = -30.0;
  double h_final = 30.0;

  double t_start() const { return h_initial * tau; }
  double t_end() const { return h_final * tau; }
  double field(double t) const { return t / tau; }

  void validate() const;
};

/// The N/2 positive momenta in strictly increasing order.
std::vector<Mode> momentum_grid(const ChainSpec& spec);

// Single-particle BdG block h_k sigma^z + Delta_k sigma^y.
Eigen::Matrix2cd bloch_hamiltonian(const Mode& mode, double h);

// Generator of the even-parity pair dynamics in the fixed Nambu basis
// {|0>, c^dag_k c^dag_-k |0>}: the traceless part of H_k restricted to that
// block, which is -(h_k sigma^z + Delta_k sigma^y).
Eigen::Matrix2cd pair_hamiltonian(const Mode& mode, double h);

BlochAngle bogoliubov_angle(const Mode& mode, double h);

struct ModeEigensystem {
  BlochAngle angle;
  Eigen::Vector2cd ground;   // pair_hamiltonian eigenvector with -epsilon_k
  Eigen::Vector2cd excited;  // +epsilon_k
};

// Instantaneous eigenbasis at field h. Throws compute_error at the
// degenerate point epsilon_k = 0 (never hit on the grid for gamma != 0).
ModeEigensystem instantaneous_eigensystem(const Mode& mode, double h);

}  // namespace xyq
