#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "xyq/chain.hpp"
#include "xyq/measures.hpp"
#include "xyq/rdm.hpp"

namespace xyq::oracle {

// Ground-truth engine at small N: exact diagonalization of the spin chain,
// exact propagation, and stochastic trajectories for the noisy protocol.
// Basis: bit j of the index is site j, bit value 0 = spin up.

inline constexpr int kMaxSites = 12;

struct DenseChainState {
  Eigen::VectorXcd amp;
  double t = 0.0;
  ChainSpec spec;
};

// H = -sum_i [ (1+gamma)/4 sx_i sx_{i+1} + (1-gamma)/4 sy_i sy_{i+1} + h s^z_i ]
// with site N+1 = 1. The field couples to s^z = sigma^z/2, which is the
// normalization for which the spectrum matches the momentum-space eps_k.
Eigen::MatrixXcd dense_hamiltonian(const ChainSpec& spec, double h);

// Parity Pi sigma^z expectation; the pipeline comparison lives in the +1 sector.
double parity_expectation(const Eigen::VectorXcd& amp);

// Lowest even-parity eigenstate at field h.
DenseChainState ground_state(const ChainSpec& spec, double h, double t0 = 0.0);

// Piecewise-constant white-noise realization: R_j drawn with variance
// xi^2/dt_noise, reproducible from (seed, stream).
struct NoiseRealization {
  double dt_noise = 0.01;
  std::vector<double> samples;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  static NoiseRealization draw(double xi, double dt_noise, double t_start,
                               double t_end, std::uint64_t seed, std::uint64_t stream);
  double value_at(double t, double t_start) const;
};

// Propagates the start state (default: exact ground state at h_i) through the
// ramp with field h0(t) + R(t). Steps never straddle noise intervals; each
// substep applies the matrix exponential of the frozen-field Hamiltonian
// through a 4th-order commutator-free Magnus pair evaluated by Chebyshev
// expansion of the sparse H-apply.
DenseChainState trajectory_evolve(const ChainSpec& spec, const RampProtocol& protocol,
                                  const NoiseRealization& realization, double dt_prop,
                                  const DenseChainState* start = nullptr);

// Partial trace onto sites (site, site + r mod N), basis {uu, ud, du, dd}.
Eigen::Matrix4cd reduced_rdm(const Eigen::VectorXcd& amp, int n_sites, int site, int r);
Eigen::Matrix4cd reduced_rdm(const DenseChainState& state, int site, int r);

// Casts a numerically-X 4x4 matrix into the TwoSpinRDM layout; throws
// validation_error if off-X leakage or the 22/33 split exceeds off_x_tol.
TwoSpinRDM to_x_state(const Eigen::Matrix4cd& rho, int r, double off_x_tol,
                      SnapshotTag tag = {});

struct MeasureValues {
  double qfi = 0.0, lqc_x = 0.0, lqc_y = 0.0, lqc_z = 0.0;
};

// Trajectory-averaged two-site RDMs for r = 1, 2 with per-entry Monte Carlo
// standard errors, plus measures of the averaged state with jackknife errors.
struct TrajectoryEnsemble {
  int trajectories = 0;
  std::array<Eigen::Matrix4cd, 2> rdm_mean;    // [r-1]
  std::array<Eigen::Matrix4cd, 2> rdm_stderr;  // re/im parts hold the errors
  std::array<MeasureValues, 2> measure_mean;
  std::array<MeasureValues, 2> measure_stderr;
};

struct EnsembleConfig {
  int trajectories = 2000;
  std::uint64_t seed = 12345;
  double dt_noise = 0.0;  // 0 = auto: min(0.01, tau/100)
  double dt_prop = 0.0;   // 0 = auto: dt_noise/4
};

TrajectoryEnsemble run_trajectories(const ChainSpec& spec, const RampProtocol& protocol,
                                    const EnsembleConfig& cfg);

// Exact noiseless evolution (single deterministic trajectory, R = 0).
DenseChainState noiseless_evolve(const ChainSpec& spec, const RampProtocol& protocol,
                                 double dt_prop = 0.0);

}  // namespace xyq::oracle
