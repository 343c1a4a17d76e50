#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "xyq/errors.hpp"
#include "xyq/oracle.hpp"
#include "xyq/rdm.hpp"

using namespace xyq;

TEST_CASE("product state |dd> assembles to diag(0,0,0,1)") {
  SpinCorrelators c;
  c.mz = -0.5;
  c.szz = {0.25, 0.25};
  const TwoSpinRDM rdm = assemble_rdm(c, 1);
  CHECK(rdm.rho11 == doctest::Approx(0.0));
  CHECK(rdm.rho22 == doctest::Approx(0.0));
  CHECK(rdm.rho44 == doctest::Approx(1.0));
  CHECK(std::abs(rdm.rho14) == 0.0);
  CHECK(rdm.trace() == doctest::Approx(1.0));
}

TEST_CASE("all-zero correlators assemble to I/4") {
  SpinCorrelators c;
  const TwoSpinRDM rdm = assemble_rdm(c, 2);
  CHECK(rdm.rho11 == doctest::Approx(0.25));
  CHECK(rdm.rho22 == doctest::Approx(0.25));
  CHECK(rdm.rho33 == doctest::Approx(0.25));
  CHECK(rdm.rho44 == doctest::Approx(0.25));
}

TEST_CASE("trace is one by construction for any correlators") {
  SpinCorrelators c;
  c.mz = 0.137;
  c.szz = {-0.21, 0.08};
  c.sxx = {0.11, -0.02};
  c.syy = {0.05, 0.01};
  for (int r : {1, 2}) {
    TwoSpinRDM rdm;
    try {
      rdm = assemble_rdm(c, r);
    } catch (const compute_error&) {
      continue;  // positivity may fail for arbitrary inputs; trace is the point
    }
    CHECK(rdm.trace() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("positivity violation throws") {
  SpinCorrelators c;
  c.mz = 0.5;
  c.szz = {0.25, 0.25};
  c.sxx = {0.4, 0.0};  // rho23 too large for the vanished inner block
  CHECK_THROWS_AS(assemble_rdm(c, 1), compute_error);
}

TEST_CASE("static RDM matches the exact partial trace at N=8, h=1.5") {
  const ChainSpec spec{8, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  std::vector<ModeState> states(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const ModeEigensystem sys = instantaneous_eigensystem(modes[i], 1.5);
    states[i].rho = sys.ground * sys.ground.adjoint();
  }
  const SpinCorrelators corr =
      spin_correlators(contractions(modes, states, 1.5, 2, spec.n_sites));
  const auto gs = oracle::ground_state(spec, 1.5);
  for (int r : {1, 2}) {
    const TwoSpinRDM rdm = assemble_rdm(corr, r);
    const Eigen::Matrix4cd exact = oracle::reduced_rdm(gs, 0, r);
    CHECK((rdm.matrix() - exact).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("eigensystem closed forms") {
  SUBCASE("I/4") {
    TwoSpinRDM rdm;
    rdm.rho11 = rdm.rho22 = rdm.rho33 = rdm.rho44 = 0.25;
    const RdmEigensystem sys = eigensystem(rdm);
    for (double p : sys.p) CHECK(p == doctest::Approx(0.25));
    CHECK((sys.sqrt_matrix() - 0.5 * Eigen::Matrix4cd::Identity()).norm() < 1e-12);
  }
  SUBCASE("projector diag(0,0,0,1)") {
    TwoSpinRDM rdm;
    rdm.rho44 = 1.0;
    const RdmEigensystem sys = eigensystem(rdm);
    CHECK(sys.p[0] == doctest::Approx(1.0));
    CHECK(sys.p[1] == doctest::Approx(0.0));
    CHECK((sys.sqrt_matrix() - rdm.matrix()).norm() < 1e-12);
  }
  SUBCASE("Bell outer block") {
    TwoSpinRDM rdm;
    rdm.rho11 = rdm.rho44 = 0.5;
    rdm.rho14 = 0.5;
    const RdmEigensystem sys = eigensystem(rdm);
    CHECK(sys.p[0] == doctest::Approx(1.0));
    CHECK(sys.p[1] == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("spectral reconstruction and square root on random X-states") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 1000; ++trial) {
    const TwoSpinRDM rdm = testutil::random_x_state(rng);
    const RdmEigensystem sys = eigensystem(rdm);

    double psum = 0.0;
    for (double p : sys.p) {
      CHECK(p >= 0.0);
      psum += p;
    }
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));

    // orthonormality
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const auto ip = (sys.vectors[a].adjoint() * sys.vectors[b])(0, 0);
        CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
      }

    // sum p |v><v| = rho
    Eigen::Matrix4cd rebuilt = Eigen::Matrix4cd::Zero();
    for (int a = 0; a < 4; ++a)
      rebuilt += sys.p[a] * sys.vectors[a] * sys.vectors[a].adjoint();
    CHECK((rebuilt - rdm.matrix()).cwiseAbs().maxCoeff() < 1e-10);

    // (sqrt rho)^2 = rho, and the sqrt keeps the X layout
    const Eigen::Matrix4cd s = sys.sqrt_matrix();
    CHECK((s * s - rdm.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((s - testutil::brute_sqrt(rdm.matrix())).cwiseAbs().maxCoeff() < 1e-9);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (!(a == b || a + b == 3)) CHECK(std::abs(s(a, b)) < 1e-12);
  }
}

TEST_CASE("degenerate blocks stay well-defined") {
  TwoSpinRDM rdm;
  rdm.rho11 = rdm.rho44 = 0.3;
  rdm.rho22 = rdm.rho33 = 0.2;
  rdm.rho14 = 0.0;  // outer block proportional to identity
  const RdmEigensystem sys = eigensystem(rdm);
  Eigen::Matrix4cd rebuilt = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 4; ++a)
    rebuilt += sys.p[a] * sys.vectors[a] * sys.vectors[a].adjoint();
  CHECK((rebuilt - rdm.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::Matrix4cd s = sys.sqrt_matrix();
  CHECK((s * s - rdm.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("clamping and hard negativity") {
  TwoSpinRDM rdm;
  rdm.rho11 = 0.6;
  rdm.rho22 = rdm.rho33 = 0.2;
  rdm.rho44 = -0.5e-9;  // inside the clamp band
  const RdmEigensystem sys = eigensystem(rdm);
  for (double p : sys.p) CHECK(p >= 0.0);
  CHECK(sys.p[0] + sys.p[1] + sys.p[2] + sys.p[3] == doctest::Approx(1.0));

  rdm.rho44 = -5e-9;  // beyond the clamp band
  CHECK_THROWS_AS(eigensystem(rdm), compute_error);
}
