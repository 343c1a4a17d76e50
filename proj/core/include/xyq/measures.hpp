#pragma once

#include <Eigen/Dense>

#include "xyq/rdm.hpp"

namespace xyq {

// Pauli matrix by axis: 0 = identity, 1 = x, 2 = y, 3 = z.
Eigen::Matrix2cd pauli(int axis);

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);

// Bipartite generator (sigma^axis x I + I x sigma^axis)/sqrt(2) built from the
// 1/sqrt(2)-normalized local observable basis.
Eigen::Matrix4cd local_sum_observable(int axis);

// Quantum Fisher information of one observable:
//   F = 2 sum_{m,n} (p_m - p_n)^2 / (p_m + p_n) |<m|O|n>|^2,
// pairs with p_m + p_n <= 1e-12 excluded (removable singularity).
double qfi_single(const RdmEigensystem& eig, const Eigen::Matrix4cd& obs);

// Sum over the local observable basis {I, sx, sy, sz}/sqrt(2); the identity
// generator commutes with everything and is skipped analytically.
double qfi_total(const RdmEigensystem& eig);

// Wigner-Yanase skew information -(1/2) Tr [sqrt(rho), V]^2.
double skew_information(const Eigen::Matrix4cd& sqrt_rho, const Eigen::Matrix4cd& obs);

struct LqcComponents {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Local quantum coherence LQC^a = I(rho, sigma^a x I) from the sqrt(rho)
// entries of the X layout.
LqcComponents lqc(const RdmEigensystem& eig);

struct MeasureResult {
  double qfi = 0.0;
  double lqc_x = 0.0, lqc_y = 0.0, lqc_z = 0.0;
  int r = 1;
  SnapshotTag tag;
};

MeasureResult evaluate_measures(const TwoSpinRDM& rdm);

}  // namespace xyq
