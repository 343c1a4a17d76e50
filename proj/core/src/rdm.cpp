#include "xyq/rdm.hpp"

#include <cmath>
#include <string>

#include "xyq/errors.hpp"

namespace xyq {

namespace {
constexpr double kClampTol = 1e-9;

// 2x2 Hermitian PSD principal square root: (M + sqrt(det) I)/sqrt(tr + 2 sqrt(det)).
Eigen::Matrix2cd sqrt_psd_2x2(const Eigen::Matrix2cd& m) {
  const double tr = m.trace().real();
  if (tr <= 0.0) return Eigen::Matrix2cd::Zero();
  const double det = std::max(0.0, (m.determinant()).real());
  const double s = std::sqrt(det);
  return (m + s * Eigen::Matrix2cd::Identity()) / std::sqrt(tr + 2.0 * s);
}
}  // namespace

Eigen::Matrix4cd TwoSpinRDM::matrix() const {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = rho11;
  m(1, 1) = rho22;
  m(2, 2) = rho33;
  m(3, 3) = rho44;
  m(0, 3) = rho14;
  m(3, 0) = std::conj(rho14);
  m(1, 2) = rho23;
  m(2, 1) = std::conj(rho23);
  return m;
}

TwoSpinRDM assemble_rdm(const SpinCorrelators& corr, int r, SnapshotTag tag) {
  if (r < 1 || r > 2) throw compute_error("assemble_rdm: separation must be 1 or 2");
  const double szz = corr.szz[r - 1];
  TwoSpinRDM rdm;
  rdm.r = r;
  rdm.tag = tag;
  rdm.rho11 = corr.mz + szz + 0.25;
  rdm.rho22 = -szz + 0.25;
  rdm.rho33 = rdm.rho22;
  rdm.rho44 = -corr.mz + szz + 0.25;
  rdm.rho23 = {corr.sxx[r - 1] + corr.syy[r - 1], corr.sxy[r - 1] - corr.syx[r - 1]};
  rdm.rho14 = {corr.sxx[r - 1] - corr.syy[r - 1], -(corr.sxy[r - 1] + corr.syx[r - 1])};

  // block eigenvalue lower bounds flag upstream corruption
  const double outer_min =
      0.5 * (rdm.rho11 + rdm.rho44 -
             std::hypot(rdm.rho11 - rdm.rho44, 2.0 * std::abs(rdm.rho14)));
  const double inner_min = rdm.rho22 - std::abs(rdm.rho23);
  if (outer_min < -kClampTol || inner_min < -kClampTol)
    throw compute_error("assembled RDM not positive semidefinite (min eig = " +
                        std::to_string(std::min(outer_min, inner_min)) + ")");
  return rdm;
}

Eigen::Matrix4cd RdmEigensystem::sqrt_matrix() const {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = alpha;
  m(1, 1) = beta;
  m(2, 2) = gamma;
  m(3, 3) = delta;
  m(0, 3) = lambda;
  m(3, 0) = std::conj(lambda);
  m(1, 2) = nu;
  m(2, 1) = std::conj(nu);
  return m;
}

RdmEigensystem eigensystem(const TwoSpinRDM& rdm) {
  RdmEigensystem sys;

  // outer {1,4} block
  const double mid_o = 0.5 * (rdm.rho11 + rdm.rho44);
  const double rad_o = std::hypot(0.5 * (rdm.rho11 - rdm.rho44), std::abs(rdm.rho14));
  // inner {2,3} block (rho22 = rho33)
  const double mid_i = 0.5 * (rdm.rho22 + rdm.rho33);
  const double rad_i = std::abs(rdm.rho23);

  std::array<double, 4> p{mid_o + rad_o, mid_o - rad_o, mid_i + rad_i, mid_i - rad_i};
  double sum = 0.0;
  for (double& v : p) {
    if (v < -kClampTol)
      throw compute_error("RDM eigenvalue below -1e-9: " + std::to_string(v));
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) throw compute_error("RDM spectrum vanished");
  for (double& v : p) v /= sum;  // renormalize after clamping
  sys.p = p;

  // outer eigenvectors span {e1, e4}
  auto outer_vec = [&](double eig) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    if (std::abs(rdm.rho14) > 1e-15) {
      v(0) = rdm.rho14;
      v(3) = eig - rdm.rho11;
      if (v.norm() < 1e-15) {  // eig == rho11, rho14 tiny
        v(0) = 1.0;
        v(3) = 0.0;
      }
    } else {
      // diagonal block; pick the basis vector matching the eigenvalue
      if (std::abs(eig - rdm.rho11) <= std::abs(eig - rdm.rho44))
        v(0) = 1.0;
      else
        v(3) = 1.0;
    }
    v.normalize();
    return v;
  };
  auto inner_vec = [&](double eig) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    if (std::abs(rdm.rho23) > 1e-15) {
      v(1) = rdm.rho23;
      v(2) = eig - rdm.rho22;
      if (v.norm() < 1e-15) {
        v(1) = 1.0;
        v(2) = 0.0;
      }
    } else {
      if (std::abs(eig - rdm.rho22) <= std::abs(eig - rdm.rho33))
        v(1) = 1.0;
      else
        v(2) = 1.0;
    }
    v.normalize();
    return v;
  };

  sys.vectors[0] = outer_vec(mid_o + rad_o);
  sys.vectors[1] = outer_vec(mid_o - rad_o);
  if (rad_o < 1e-15) {  // degenerate outer block: computational basis
    sys.vectors[0] = Eigen::Vector4cd::Unit(0);
    sys.vectors[1] = Eigen::Vector4cd::Unit(3);
  }
  sys.vectors[2] = inner_vec(mid_i + rad_i);
  sys.vectors[3] = inner_vec(mid_i - rad_i);
  if (rad_i < 1e-15) {
    sys.vectors[2] = Eigen::Vector4cd::Unit(1);
    sys.vectors[3] = Eigen::Vector4cd::Unit(2);
  }

  // principal square root, blockwise
  Eigen::Matrix2cd outer;
  outer << rdm.rho11, rdm.rho14, std::conj(rdm.rho14), rdm.rho44;
  Eigen::Matrix2cd inner;
  inner << rdm.rho22, rdm.rho23, std::conj(rdm.rho23), rdm.rho33;
  // clamp tiny negatives so sqrt stays real
  auto clamp_block = [](Eigen::Matrix2cd m) {
    const double mid = 0.5 * m.trace().real();
    const double rad = std::hypot(0.5 * (m(0, 0) - m(1, 1)).real(), std::abs(m(0, 1)));
    const double lo = mid - rad;
    if (lo < 0.0) m -= lo * Eigen::Matrix2cd::Identity();
    return m;
  };
  const Eigen::Matrix2cd so = sqrt_psd_2x2(clamp_block(outer));
  const Eigen::Matrix2cd si = sqrt_psd_2x2(clamp_block(inner));
  sys.alpha = so(0, 0).real();
  sys.delta = so(1, 1).real();
  sys.lambda = so(0, 1);
  sys.beta = si(0, 0).real();
  sys.gamma = si(1, 1).real();
  sys.nu = si(0, 1);
  return sys;
}

}  // namespace xyq
