#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "xyq/correlators.hpp"

namespace xyq {

// Where a snapshot came from, carried along for persistence.
struct SnapshotTag {
  double tau = 0.0;
  double xi = 0.0;
  double h = 0.0;
  double t = 0.0;
};

// Two-spin reduced density matrix in the basis {uu, ud, du, dd}. X-structure:
// nonzero entries on the diagonal and anti-diagonal only, rho22 = rho33.
struct TwoSpinRDM {
  double rho11 = 0.0, rho22 = 0.0, rho33 = 0.0, rho44 = 0.0;
  std::complex<double> rho14{0.0, 0.0}, rho23{0.0, 0.0};
  int r = 1;
  SnapshotTag tag;

  double trace() const { return rho11 + rho22 + rho33 + rho44; }
  Eigen::Matrix4cd matrix() const;
};

// rho11 = mz + szz + 1/4, rho22 = rho33 = -szz + 1/4,
// rho44 = -mz + szz + 1/4, rho23 = sxx + syy + i(sxy - syx),
// rho14 = sxx - syy - i(sxy + syx). Throws compute_error if a block
// eigenvalue falls below -1e-9 (upstream correlator corruption).
TwoSpinRDM assemble_rdm(const SpinCorrelators& corr, int r, SnapshotTag tag = {});

// Spectrum, eigenvectors, and the principal square root of an X-state.
// p1/p2 are the outer {1,4} block pair (+/-), p3/p4 the inner {2,3} pair.
struct RdmEigensystem {
  std::array<double, 4> p{};
  std::array<Eigen::Vector4cd, 4> vectors;

  // sqrt(rho) in the X layout of the state itself
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;  // diagonal 11,22,33,44
  std::complex<double> lambda{0.0, 0.0};  // (1,4)
  std::complex<double> nu{0.0, 0.0};      // (2,3)

  Eigen::Matrix4cd sqrt_matrix() const;
};

// Closed-form block eigensystem. Eigenvalues in [-1e-9, 0) are clamped to 0
// and the spectrum renormalized; anything lower throws compute_error.
RdmEigensystem eigensystem(const TwoSpinRDM& rdm);

}  // namespace xyq
