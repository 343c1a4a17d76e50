#pragma once

// Test-only oracles, independent of the implementation paths they check:
// brute-force QFI via full eigendecomposition, sqrt(rho) via spectral
// synthesis, and a deterministic random X-state generator.

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "xyq/measures.hpp"
#include "xyq/rdm.hpp"

namespace testutil {

using cd = std::complex<double>;

// Eq.-level QFI: full Hermitian eigendecomposition, direct pair sum.
inline double brute_qfi(const Eigen::Matrix4cd& rho, const Eigen::Matrix4cd& obs) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  double f = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const double pm = std::max(0.0, es.eigenvalues()(m));
      const double pn = std::max(0.0, es.eigenvalues()(n));
      if (pm + pn < 1e-12) continue;
      const cd elem =
          (es.eigenvectors().col(m).adjoint() * obs * es.eigenvectors().col(n))(0, 0);
      f += 2.0 * (pm - pn) * (pm - pn) / (pm + pn) * std::norm(elem);
    }
  }
  return f;
}

inline double brute_qfi_total(const Eigen::Matrix4cd& rho) {
  double f = 0.0;
  for (int axis = 1; axis <= 3; ++axis)
    f += brute_qfi(rho, xyq::local_sum_observable(axis));
  return f;
}

// principal square root by spectral synthesis
inline Eigen::Matrix4cd brute_sqrt(const Eigen::Matrix4cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  for (int m = 0; m < 4; ++m) {
    const double p = std::max(0.0, es.eigenvalues()(m));
    s += std::sqrt(p) * es.eigenvectors().col(m) * es.eigenvectors().col(m).adjoint();
  }
  return s;
}

inline double brute_skew(const Eigen::Matrix4cd& rho, const Eigen::Matrix4cd& obs) {
  const Eigen::Matrix4cd s = brute_sqrt(rho);
  const Eigen::Matrix4cd comm = s * obs - obs * s;
  return -0.5 * (comm * comm).trace().real();
}

// random valid X-state with rho22 = rho33 (the domain of TwoSpinRDM)
inline xyq::TwoSpinRDM random_x_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, 4> w{};
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(std::max(unit(rng), 1e-300));  // Dirichlet(1,1,1,1)
    total += v;
  }
  for (double& v : w) v /= total;
  const double inner = 0.5 * (w[1] + w[2]);

  xyq::TwoSpinRDM rdm;
  rdm.rho11 = w[0];
  rdm.rho22 = rdm.rho33 = inner;
  rdm.rho44 = w[3] + (w[1] + w[2]) - 2.0 * inner;  // keep trace 1
  const double m14 = unit(rng) * std::sqrt(rdm.rho11 * rdm.rho44);
  const double m23 = unit(rng) * rdm.rho22;
  const double p14 = 2.0 * M_PI * unit(rng), p23 = 2.0 * M_PI * unit(rng);
  rdm.rho14 = std::polar(m14, p14);
  rdm.rho23 = std::polar(m23, p23);
  rdm.r = 1;
  return rdm;
}

// pure X-states inside the rho22 = rho33 domain: cos|00> + e^{ip} sin|11>
// with any angle, or the balanced inner superposition (|01> + e^{ip}|10>)/sqrt(2)
inline Eigen::Matrix4cd random_pure_x(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double th = M_PI * unit(rng);
  const double ph = 2.0 * M_PI * unit(rng);
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  if (unit(rng) < 0.5) {
    psi(0) = std::cos(0.5 * th);
    psi(3) = std::polar(std::sin(0.5 * th), ph);
  } else {
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = std::polar(1.0 / std::sqrt(2.0), ph);
  }
  return psi * psi.adjoint();
}

}  // namespace testutil
