#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xyq/correlators.hpp"
#include "xyq/errors.hpp"
#include "xyq/oracle.hpp"
#include "xyq/rdm.hpp"

using namespace xyq;
using std::numbers::pi;
using K = MajoranaOp::Kind;

namespace {

// ground-state mode set at field h
std::vector<ModeState> static_states(const std::vector<Mode>& modes, double h) {
  std::vector<ModeState> states(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const ModeEigensystem sys = instantaneous_eigensystem(modes[i], h);
    states[i].rho = sys.ground * sys.ground.adjoint();
    states[i].u_abs2 = 0.0;
    states[i].vu_conj = {0.0, 0.0};
  }
  return states;
}

}  // namespace

TEST_CASE("equilibrium collapse: aa = delta, bb = -delta") {
  const ChainSpec spec{20, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  const auto states = static_states(modes, 1.7);
  const ContractionTable t = contractions(modes, states, 1.7, 2, spec.n_sites);
  CHECK(t.aa(0) == std::complex<double>(1.0, 0.0));  // exact: sum of zero terms
  CHECK(t.bb(0) == std::complex<double>(-1.0, 0.0));
  for (int r : {1, 2}) {
    CHECK(std::abs(t.aa(r)) == 0.0);
    CHECK(std::abs(t.bb(r)) == 0.0);
  }
}

TEST_CASE("anticommutation symmetry of the table") {
  const ChainSpec spec{12, 0.8, -30, 30};
  const auto modes = momentum_grid(spec);
  // a quenched snapshot with nonzero coherences
  std::vector<ModeState> states(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    states[i].u_abs2 = 0.1 + 0.05 * i;
    states[i].vu_conj = std::polar(0.2, 0.4 * i);
  }
  const ContractionTable t = contractions(modes, states, 0.3, 2, spec.n_sites);
  for (int r : {0, 1, 2}) {
    const double d = (r == 0) ? 2.0 : 0.0;
    CHECK(std::abs(t.aa(-r) - (-t.aa(r) + d)) < 1e-14);
    CHECK(std::abs(t.bb(-r) - (-t.bb(r) - d)) < 1e-14);
    CHECK(std::abs(t.ba(r) + t.ab(-r)) < 1e-14);
  }
}

TEST_CASE("ab(0) at h = 30, N = 200") {
  // independent evaluation of the finite sum with exact theta_k
  const ChainSpec spec{200, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  double expected = 0.0;
  for (const Mode& m : modes) {
    const double hk = 30.0 - std::cos(m.k);
    expected += hk / std::hypot(hk, m.delta);
  }
  expected *= 2.0 / 200;
  CHECK(expected == doctest::Approx(0.999722).epsilon(1e-5));  // frozen value

  const auto states = static_states(modes, 30.0);
  const ContractionTable t = contractions(modes, states, 30.0, 2, spec.n_sites);
  CHECK(t.ab(0).real() == doctest::Approx(expected).epsilon(1e-13));

  // cross-check against N=8 exact diagonalization: ab(0) = 2 <s^z>
  const ChainSpec small{8, 1.0, -30, 30};
  const auto smodes = momentum_grid(small);
  const auto sstates = static_states(smodes, 30.0);
  const ContractionTable st = contractions(smodes, sstates, 30.0, 2, small.n_sites);
  const auto gs = oracle::ground_state(small, 30.0);
  const Eigen::Matrix4cd rdm = oracle::reduced_rdm(gs, 0, 1);
  const double mz_ed = 0.5 * (rdm(0, 0) + rdm(1, 1) - rdm(2, 2) - rdm(3, 3)).real();
  CHECK(st.ab(0).real() == doctest::Approx(2.0 * mz_ed).epsilon(1e-9));
}

TEST_CASE("post-quench idealization matches the p_k cosine sum") {
  const ChainSpec spec{16, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  const double tau = 0.7;
  std::vector<ModeState> states(modes.size());
  std::vector<double> pk(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    pk[i] = std::exp(-pi * modes[i].delta * modes[i].delta * tau);
    states[i].u_abs2 = pk[i];
    states[i].vu_conj = {0.0, 0.0};
  }
  // theta_k ~ 0 idealization: evaluate at huge field
  const double h = 1e12;
  const ContractionTable t = contractions(modes, states, h, 2, spec.n_sites);
  for (int r : {0, 1, 2}) {
    double expected = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i)
      expected += (1.0 - 2.0 * pk[i]) * std::cos(modes[i].k * r);
    expected *= 2.0 / spec.n_sites;
    CHECK(t.ab(r).real() == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("wick strings") {
  const ChainSpec spec{12, 0.9, -30, 30};
  const auto modes = momentum_grid(spec);
  std::vector<ModeState> states(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    states[i].u_abs2 = 0.07 * (i + 1);
    states[i].vu_conj = std::polar(0.15, 0.9 * i + 0.2);
  }
  const ContractionTable t = contractions(modes, states, -0.4, 2, spec.n_sites);

  SUBCASE("length 2 is the table entry") {
    const std::vector<MajoranaOp> s{{K::B, 0}, {K::A, 1}};
    CHECK(wick_string(t, s) == t.ba(1));
  }
  SUBCASE("length 4 expansion") {
    const std::vector<MajoranaOp> s{{K::B, 0}, {K::A, 1}, {K::B, 1}, {K::A, 2}};
    const auto expected =
        t.ba(1) * t.ba(1) - t.bb(1) * t.aa(1) + t.ba(2) * t.ab(0);
    CHECK(std::abs(wick_string(t, s) - expected) < 1e-14);
  }
  SUBCASE("length 6 against a hand expansion of <A0 B0 A1 B1 A2 B2>") {
    const std::vector<MajoranaOp> s{{K::A, 0}, {K::B, 0}, {K::A, 1},
                                    {K::B, 1}, {K::A, 2}, {K::B, 2}};
    // expand along the first operator
    const auto p23 = [&](int a, int b) {
      // pf of the 4-string obtained by removing ops 0 and j
      std::vector<MajoranaOp> rest;
      for (int m = 1; m < 6; ++m)
        if (m != a && m != b) rest.push_back(s[m]);
      return rest;
    };
    std::complex<double> expected = 0.0;
    double sign = 1.0;
    for (int j = 1; j < 6; ++j) {
      std::vector<MajoranaOp> rest;
      for (int m = 1; m < 6; ++m)
        if (m != j) rest.push_back(s[m]);
      // 4-point pfaffian of rest
      auto c = [&](int x, int y) {
        const MajoranaOp &ox = rest[x], &oy = rest[y];
        const int r = oy.site - ox.site;
        if (ox.kind == K::A && oy.kind == K::A) return t.aa(r);
        if (ox.kind == K::B && oy.kind == K::B) return t.bb(r);
        if (ox.kind == K::A && oy.kind == K::B) return t.ab(r);
        return t.ba(r);
      };
      const auto pf4 = c(0, 1) * c(2, 3) - c(0, 2) * c(1, 3) + c(0, 3) * c(1, 2);
      auto c0 = [&](int y) {
        const MajoranaOp& oy = s[y];
        const int r = oy.site - s[0].site;
        if (oy.kind == K::A) return t.aa(r);
        return t.ab(r);
      };
      expected += sign * c0(j) * pf4;
      sign = -sign;
    }
    (void)p23;
    CHECK(std::abs(wick_string(t, s) - expected) < 1e-14);
  }
  SUBCASE("odd length throws") {
    const std::vector<MajoranaOp> s{{K::A, 0}, {K::B, 0}, {K::A, 1}};
    CHECK_THROWS_AS(wick_string(t, s), compute_error);
  }
  SUBCASE("separation beyond the table throws") {
    const std::vector<MajoranaOp> s{{K::A, 0}, {K::A, 3}};
    CHECK_THROWS_AS(wick_string(t, s), compute_error);
  }
  SUBCASE("strings longer than 6 are rejected") {
    std::vector<MajoranaOp> s;
    for (int j = 0; j < 4; ++j) {
      s.push_back({K::A, 0});
      s.push_back({K::B, 0});
    }
    CHECK_THROWS_AS(wick_string(t, s), compute_error);
  }
  SUBCASE("table requires r_max >= 2") {
    CHECK_THROWS_AS(contractions(modes, states, 0.0, 1, spec.n_sites), compute_error);
  }
}

TEST_CASE("fully polarized limit of the spin correlators") {
  const ChainSpec spec{24, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  const auto states = static_states(modes, 1e9);
  const SpinCorrelators c =
      spin_correlators(contractions(modes, states, 1e9, 2, spec.n_sites));
  CHECK(c.mz == doctest::Approx(0.5).epsilon(1e-12));
  for (int r : {1, 2}) {
    CHECK(c.szz[r - 1] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(std::abs(c.sxx[r - 1]) < 1e-9);
    CHECK(std::abs(c.syy[r - 1]) < 1e-9);
    CHECK(std::abs(c.sxy[r - 1]) < 1e-9);
    CHECK(std::abs(c.syx[r - 1]) < 1e-9);
  }
}

TEST_CASE("Ising point exact values") {
  // gamma=1, h=0: <sx sx> = 1/4 at r=1,2; <sy sy> = <sz sz> = 0; mz = 0
  const ChainSpec spec{16, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  const auto states = static_states(modes, 0.0);
  const SpinCorrelators c =
      spin_correlators(contractions(modes, states, 0.0, 2, spec.n_sites));
  CHECK(c.mz == doctest::Approx(0.0).epsilon(1e-12));
  for (int r : {1, 2}) {
    CHECK(c.sxx[r - 1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(c.syy[r - 1]) < 1e-12);
    CHECK(std::abs(c.szz[r - 1]) < 1e-12);
  }
}

TEST_CASE("static correlators match exact diagonalization at N=8, h=1.5") {
  const ChainSpec spec{8, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  const auto states = static_states(modes, 1.5);
  const SpinCorrelators c =
      spin_correlators(contractions(modes, states, 1.5, 2, spec.n_sites));
  CHECK(c.max_imag < 1e-9);

  const auto gs = oracle::ground_state(spec, 1.5);
  for (int r : {1, 2}) {
    const Eigen::Matrix4cd rdm = oracle::reduced_rdm(gs, 0, r);
    // recover correlators from the exact RDM
    const double mz = 0.5 * (rdm(0, 0) + rdm(1, 1) - rdm(2, 2) - rdm(3, 3)).real();
    const double szz = 0.25 * (rdm(0, 0) - rdm(1, 1) - rdm(2, 2) + rdm(3, 3)).real();
    const std::complex<double> r23 = rdm(1, 2), r14 = rdm(0, 3);
    const double sxx = 0.5 * (r23.real() + r14.real());
    const double syy = 0.5 * (r23.real() - r14.real());
    const double sxy = 0.5 * (r23.imag() - r14.imag());
    const double syx = -0.5 * (r23.imag() + r14.imag());
    CHECK(c.szz[r - 1] == doctest::Approx(szz).epsilon(1e-8));
    CHECK(c.sxx[r - 1] == doctest::Approx(sxx).epsilon(1e-8));
    CHECK(std::abs(c.syy[r - 1] - syy) < 1e-8);
    CHECK(std::abs(c.sxy[r - 1] - sxy) < 1e-8);
    CHECK(std::abs(c.syx[r - 1] - syx) < 1e-8);
    CHECK(std::abs(c.mz - mz) < 1e-8);
  }
}
