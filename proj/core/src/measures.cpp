#include "xyq/measures.hpp"

#include <cmath>

#include "xyq/errors.hpp"

namespace xyq {

namespace {
constexpr double kPairFloor = 1e-12;
constexpr std::complex<double> kI(0.0, 1.0);
}  // namespace

Eigen::Matrix2cd pauli(int axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case 0: m.setIdentity(); break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw compute_error("pauli axis must be 0..3");
  }
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

Eigen::Matrix4cd local_sum_observable(int axis) {
  const Eigen::Matrix2cd s = pauli(axis);
  const Eigen::Matrix2cd id = pauli(0);
  return (kron2(s, id) + kron2(id, s)) / std::sqrt(2.0);
}

double qfi_single(const RdmEigensystem& eig, const Eigen::Matrix4cd& obs) {
  double f = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const double pm = eig.p[m], pn = eig.p[n];
      const double denom = pm + pn;
      if (denom <= kPairFloor) continue;
      const double diff = pm - pn;
      if (diff == 0.0) continue;
      const std::complex<double> elem =
          (eig.vectors[m].adjoint() * obs * eig.vectors[n])(0, 0);
      f += 2.0 * diff * diff / denom * std::norm(elem);
    }
  }
  return f;
}

double qfi_total(const RdmEigensystem& eig) {
  double f = 0.0;
  for (int axis = 1; axis <= 3; ++axis)  // mu = 0 term is identically zero
    f += qfi_single(eig, local_sum_observable(axis));
  return f;
}

double skew_information(const Eigen::Matrix4cd& sqrt_rho, const Eigen::Matrix4cd& obs) {
  const Eigen::Matrix4cd comm = sqrt_rho * obs - obs * sqrt_rho;
  return -0.5 * (comm * comm).trace().real();
}

LqcComponents lqc(const RdmEigensystem& eig) {
  // Closed forms from the sqrt(rho) X entries; the x/y cross term uses
  // alpha*gamma + beta*delta, which equals the alpha*beta + gamma*delta form
  // on the rho22 = rho33 domain (beta = gamma) and stays exact off it.
  const double cross = eig.alpha * eig.gamma + eig.beta * eig.delta;
  const double re_ln = (eig.lambda * eig.nu).real();
  LqcComponents out;
  out.x = 1.0 - 2.0 * cross - 4.0 * re_ln;
  out.y = 1.0 - 2.0 * cross + 4.0 * re_ln;
  out.z = 1.0 - (eig.alpha * eig.alpha + eig.beta * eig.beta + eig.gamma * eig.gamma +
                 eig.delta * eig.delta -
                 2.0 * (std::norm(eig.lambda) + std::norm(eig.nu)));
  return out;
}

MeasureResult evaluate_measures(const TwoSpinRDM& rdm) {
  const RdmEigensystem eig = eigensystem(rdm);
  MeasureResult res;
  res.qfi = qfi_total(eig);
  const LqcComponents c = lqc(eig);
  res.lqc_x = c.x;
  res.lqc_y = c.y;
  res.lqc_z = c.z;
  res.r = rdm.r;
  res.tag = rdm.tag;
  return res;
}

}  // namespace xyq
