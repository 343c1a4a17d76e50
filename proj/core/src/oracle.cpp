#include "xyq/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "xyq/errors.hpp"
#include "xyq/parallel.hpp"
#include "xyq/rng.hpp"

namespace xyq::oracle {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

int popcount(int b) { return std::popcount(static_cast<unsigned>(b)); }

void check_size(const ChainSpec& spec) {
  spec.validate();
  if (spec.n_sites > kMaxSites)
    throw config_error("oracle supports N <= " + std::to_string(kMaxSites) +
                       ", got " + std::to_string(spec.n_sites));
}

// Even-parity sector of the chain as a real sparse operator
// H(h) = bonds - h * sum_i s^z_i. Bit j = site j, bit 0 = spin up.
struct SparseChain {
  int n = 0;
  int dim_full = 0;
  int dim = 0;                   // packed even-sector dimension
  std::vector<int> unpack;       // packed -> full index
  std::vector<int> pack;         // full -> packed (-1 for odd parity)
  std::vector<double> zhalf;     // sum_i s^z eigenvalue = (n - 2 popcount)/2
  std::vector<int> bond_target;  // [row * n + bond] packed target
  std::vector<double> bond_coeff;
  double bond_norm = 0.0;

  explicit SparseChain(const ChainSpec& spec) : n(spec.n_sites) {
    dim_full = 1 << n;
    pack.assign(dim_full, -1);
    for (int b = 0; b < dim_full; ++b)
      if (popcount(b) % 2 == 0) {
        pack[b] = static_cast<int>(unpack.size());
        unpack.push_back(b);
      }
    dim = static_cast<int>(unpack.size());
    zhalf.resize(dim);
    bond_target.resize(static_cast<std::size_t>(dim) * n);
    bond_coeff.resize(static_cast<std::size_t>(dim) * n);
    const double cxx = -0.25 * (1.0 + spec.gamma);
    const double cyy = -0.25 * (1.0 - spec.gamma);
    for (int i = 0; i < dim; ++i) {
      const int b = unpack[i];
      zhalf[i] = 0.5 * (n - 2 * popcount(b));
      for (int j = 0; j < n; ++j) {
        const int j2 = (j + 1) % n;
        const int p = b ^ ((1 << j) | (1 << j2));
        const bool equal_bits = (((p >> j) & 1) == ((p >> j2) & 1));
        bond_target[static_cast<std::size_t>(i) * n + j] = pack[p];
        bond_coeff[static_cast<std::size_t>(i) * n + j] =
            cxx + cyy * (equal_bits ? -1.0 : 1.0);
      }
    }
    bond_norm = n * (std::abs(1.0 + spec.gamma) + std::abs(1.0 - spec.gamma)) / 4.0;
  }

  void apply(double h, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    for (int i = 0; i < dim; ++i) {
      std::complex<double> acc = -h * zhalf[i] * in[i];
      const std::size_t base = static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j)
        acc += bond_coeff[base + j] * in[bond_target[base + j]];
      out[i] = acc;
    }
  }

  double spectral_bound(double h) const { return bond_norm + std::abs(h) * n * 0.5 + 1.0; }
};

// J_0..J_nmax by Miller downward recurrence, normalized with
// J_0 + 2 sum_{k even} J_k = 1.
void bessel_j(double z, int nmax, std::vector<double>& out) {
  out.assign(nmax + 1, 0.0);
  if (z < 1e-12) {
    out[0] = 1.0;
    if (nmax >= 1) out[1] = 0.5 * z;
    return;
  }
  const int start = nmax + 14 + static_cast<int>(std::ceil(std::sqrt(40.0 * (nmax + 1))));
  double fp = 0.0, f = 1e-300;
  double norm = 0.0;
  for (int k = start; k >= 0; --k) {
    const double fm = (2.0 * (k + 1) / z) * f - fp;
    fp = f;
    f = fm;
    if (k <= nmax) out[k] = f;
    if (k % 2 == 0) norm += (k == 0 ? 1.0 : 2.0) * f;
    if (std::abs(f) > 1e270) {  // rescale to avoid overflow
      fp /= 1e270;
      f /= 1e270;
      norm /= 1e270;
      for (double& v : out) v /= 1e270;
    }
  }
  for (double& v : out) v /= norm;
}

struct Propagator {
  const SparseChain& chain;
  Eigen::VectorXcd t0, t1, t2;  // Chebyshev recurrence scratch
  std::vector<double> bessel;

  explicit Propagator(const SparseChain& c)
      : chain(c), t0(c.dim), t1(c.dim), t2(c.dim) {}

  // psi <- exp(-i H(h) dt) psi, Chebyshev expansion over [-lb, lb]
  void exp_apply(double h, double dt, Eigen::VectorXcd& psi) {
    const double lb = chain.spectral_bound(h);
    const double z = lb * dt;
    int nmax = static_cast<int>(std::ceil(z)) + 24;
    bessel_j(z, nmax, bessel);
    while (nmax > 1 && std::abs(bessel[nmax]) < 1e-18) --nmax;

    t0 = psi;
    chain.apply(h, t0, t1);
    t1 /= lb;
    Eigen::VectorXcd acc = bessel[0] * t0;
    std::complex<double> phase(0.0, -1.0);  // (-i)^n
    acc += 2.0 * bessel[1] * phase * t1;
    for (int nn = 2; nn <= nmax; ++nn) {
      chain.apply(h, t1, t2);
      t2 = (2.0 / lb) * t2 - t0;
      t0.swap(t1);
      t1.swap(t2);
      phase *= std::complex<double>(0.0, -1.0);
      acc += 2.0 * bessel[nn] * phase * t1;
    }
    psi = acc;
  }

  // One 4th-order commutator-free Magnus step over [t, t+dt]; field(t) must be
  // smooth inside the step (noise intervals never straddle).
  template <class FieldFn>
  void cf4_step(double t, double dt, const FieldFn& field, Eigen::VectorXcd& psi) {
    static const double root3_6 = std::sqrt(3.0) / 6.0;
    const double h1 = field(t + (0.5 - root3_6) * dt);
    const double h2 = field(t + (0.5 + root3_6) * dt);
    const double a1 = 0.25 + root3_6, a2 = 0.25 - root3_6;
    // each factor is a frozen-field exponential over dt/2
    exp_apply(2.0 * (a1 * h1 + a2 * h2), 0.5 * dt, psi);
    exp_apply(2.0 * (a2 * h1 + a1 * h2), 0.5 * dt, psi);
  }

  template <class FieldFn>
  void advance(double t0_, double t1_, double dt_prop, const FieldFn& field,
               Eigen::VectorXcd& psi) {
    const int steps = std::max(1, static_cast<int>(std::ceil((t1_ - t0_) / dt_prop)));
    const double dt = (t1_ - t0_) / steps;
    for (int s = 0; s < steps; ++s) cf4_step(t0_ + s * dt, dt, field, psi);
  }
};

Eigen::VectorXcd pack_state(const SparseChain& chain, const Eigen::VectorXcd& full) {
  Eigen::VectorXcd packed(chain.dim);
  double odd = 0.0;
  for (int b = 0; b < chain.dim_full; ++b) {
    if (chain.pack[b] >= 0)
      packed[chain.pack[b]] = full[b];
    else
      odd += std::norm(full[b]);
  }
  if (odd > 1e-16)
    throw compute_error("oracle state has odd-parity weight " + std::to_string(odd));
  return packed;
}

Eigen::VectorXcd unpack_state(const SparseChain& chain, const Eigen::VectorXcd& packed) {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(chain.dim_full);
  for (int i = 0; i < chain.dim; ++i) full[chain.unpack[i]] = packed[i];
  return full;
}

double resolve_dt_noise(double requested, double tau) {
  return requested > 0.0 ? requested : std::min(0.01, tau / 100.0);
}

double resolve_dt_prop(double requested, double dt_noise) {
  return requested > 0.0 ? requested : 0.25 * dt_noise;
}

}  // namespace

Eigen::MatrixXcd dense_hamiltonian(const ChainSpec& spec, double h) {
  check_size(spec);
  const int n = spec.n_sites;
  const int dim = 1 << n;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  const double cxx = -0.25 * (1.0 + spec.gamma);
  const double cyy = -0.25 * (1.0 - spec.gamma);
  for (int b = 0; b < dim; ++b) {
    H(b, b) += -0.5 * h * (n - 2 * popcount(b));
    for (int j = 0; j < n; ++j) {
      const int j2 = (j + 1) % n;
      const int p = b ^ ((1 << j) | (1 << j2));
      const bool equal_bits = (((p >> j) & 1) == ((p >> j2) & 1));
      H(b, p) += cxx + cyy * (equal_bits ? -1.0 : 1.0);
    }
  }
  return H;
}

double parity_expectation(const Eigen::VectorXcd& amp) {
  double par = 0.0;
  for (int b = 0; b < amp.size(); ++b)
    par += (popcount(b) % 2 ? -1.0 : 1.0) * std::norm(amp[b]);
  return par;
}

DenseChainState ground_state(const ChainSpec& spec, double h, double t0) {
  check_size(spec);
  const Eigen::MatrixXcd H = dense_hamiltonian(spec, h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
  for (int c = 0; c < H.rows(); ++c) {
    Eigen::VectorXcd v = solver.eigenvectors().col(c);
    double par = parity_expectation(v);
    if (par > 0.99) return {v, t0, spec};
    if (std::abs(par) < 0.99) {
      // near-degenerate pair mixed by the solver: project onto even sector
      for (int b = 0; b < v.size(); ++b)
        if (popcount(b) % 2) v[b] = 0.0;
      const double nrm = v.norm();
      if (nrm > 1e-8) {
        v /= nrm;
        const Eigen::VectorXcd resid = H * v - solver.eigenvalues()(c) * v;
        if (resid.norm() < 1e-8) return {v, t0, spec};
      }
    }
  }
  throw compute_error("no even-parity eigenstate found");
}

NoiseRealization NoiseRealization::draw(double xi, double dt_noise, double t_start,
                                        double t_end, std::uint64_t seed,
                                        std::uint64_t stream) {
  if (!(dt_noise > 0.0)) throw config_error("dt_noise must be positive");
  NoiseRealization nr;
  nr.dt_noise = dt_noise;
  nr.seed = seed;
  nr.stream = stream;
  const auto count = static_cast<std::size_t>(std::ceil((t_end - t_start) / dt_noise));
  nr.samples.resize(count);
  const CounterRng rng(seed, stream);
  const double sigma = xi / std::sqrt(dt_noise);
  for (std::size_t j = 0; j < count; ++j) nr.samples[j] = sigma * rng.gaussian(j);
  return nr;
}

double NoiseRealization::value_at(double t, double t_start) const {
  if (samples.empty()) return 0.0;
  auto j = static_cast<std::size_t>(std::floor((t - t_start) / dt_noise));
  if (j >= samples.size()) j = samples.size() - 1;
  return samples[j];
}

DenseChainState trajectory_evolve(const ChainSpec& spec, const RampProtocol& protocol,
                                  const NoiseRealization& realization, double dt_prop,
                                  const DenseChainState* start) {
  check_size(spec);
  protocol.validate();
  const SparseChain chain(spec);
  Propagator prop(chain);

  DenseChainState init =
      start ? *start : ground_state(spec, protocol.h_initial, protocol.t_start());
  Eigen::VectorXcd psi = pack_state(chain, init.amp);

  const double t_start = protocol.t_start(), t_end = protocol.t_end();
  const double dtn = realization.samples.empty()
                         ? (t_end - t_start)
                         : realization.dt_noise;
  const double dtp = dt_prop > 0.0 ? dt_prop : 0.25 * dtn;

  double t = t_start;
  std::size_t j = 0;
  while (t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    const double t_next = realization.samples.empty()
                              ? t_end
                              : std::min(t_end, t_start + (j + 1) * dtn);
    const double r = realization.samples.empty() ? 0.0 : realization.samples[std::min(
                         j, realization.samples.size() - 1)];
    prop.advance(t, t_next, dtp, [&](double tt) { return tt / protocol.tau + r; }, psi);
    t = t_next;
    ++j;
  }
  psi /= psi.norm();
  return {unpack_state(chain, psi), t_end, spec};
}

DenseChainState noiseless_evolve(const ChainSpec& spec, const RampProtocol& protocol,
                                 double dt_prop) {
  NoiseRealization empty;
  empty.dt_noise = 0.01;
  const double dtp = dt_prop > 0.0 ? dt_prop : 1e-3 * std::min(1.0, protocol.tau);
  return trajectory_evolve(spec, protocol, empty, dtp);
}

Eigen::Matrix4cd reduced_rdm(const Eigen::VectorXcd& amp, int n_sites, int site, int r) {
  if (r < 1 || r > 2) throw compute_error("reduced_rdm: r must be 1 or 2");
  const int dim = 1 << n_sites;
  if (amp.size() != dim) throw compute_error("reduced_rdm: state size mismatch");
  const int site2 = (site + r) % n_sites;
  const int m0 = 1 << site, m1 = 1 << site2;
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int b = 0; b < dim; ++b) {
    const int a = (b & m0) ? 1 : 0;
    const int c = (b & m1) ? 1 : 0;
    const int base = b & ~(m0 | m1);
    const int row = 2 * a + c;
    for (int a2 = 0; a2 < 2; ++a2)
      for (int c2 = 0; c2 < 2; ++c2) {
        const int b2 = base | (a2 ? m0 : 0) | (c2 ? m1 : 0);
        rho(row, 2 * a2 + c2) += amp[b] * std::conj(amp[b2]);
      }
  }
  return rho;
}

Eigen::Matrix4cd reduced_rdm(const DenseChainState& state, int site, int r) {
  return reduced_rdm(state.amp, state.spec.n_sites, site, r);
}

TwoSpinRDM to_x_state(const Eigen::Matrix4cd& rho, int r, double off_x_tol,
                      SnapshotTag tag) {
  double off_x = 0.0;
  static constexpr bool x_mask[4][4] = {{true, false, false, true},
                                        {false, true, true, false},
                                        {false, true, true, false},
                                        {true, false, false, true}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!x_mask[i][j]) off_x = std::max(off_x, std::abs(rho(i, j)));
  const double split = std::abs(rho(1, 1) - rho(2, 2));
  if (off_x > off_x_tol || split > off_x_tol)
    throw validation_error("state is not X-structured: off-X leakage " +
                           std::to_string(std::max(off_x, split)));

  TwoSpinRDM rdm;
  rdm.r = r;
  rdm.tag = tag;
  rdm.rho11 = rho(0, 0).real();
  rdm.rho22 = rdm.rho33 = 0.5 * (rho(1, 1) + rho(2, 2)).real();
  rdm.rho44 = rho(3, 3).real();
  rdm.rho14 = 0.5 * (rho(0, 3) + std::conj(rho(3, 0)));
  rdm.rho23 = 0.5 * (rho(1, 2) + std::conj(rho(2, 1)));
  return rdm;
}

namespace {

MeasureValues measures_of(const Eigen::Matrix4cd& rho, int r) {
  const TwoSpinRDM rdm = to_x_state(rho, r, 1.0);  // cast only; callers check X
  const MeasureResult m = evaluate_measures(rdm);
  return {m.qfi, m.lqc_x, m.lqc_y, m.lqc_z};
}

// pairwise tree sum over the trajectory index
Eigen::Matrix4cd pairwise_sum(std::vector<Eigen::Matrix4cd>& v, std::size_t lo,
                              std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

TrajectoryEnsemble run_trajectories(const ChainSpec& spec, const RampProtocol& protocol,
                                    const EnsembleConfig& cfg) {
  check_size(spec);
  if (cfg.trajectories < 2) throw config_error("need at least 2 trajectories");
  const double dtn = resolve_dt_noise(cfg.dt_noise, protocol.tau);
  const double dtp = resolve_dt_prop(cfg.dt_prop, dtn);

  const DenseChainState init =
      ground_state(spec, protocol.h_initial, protocol.t_start());

  const int m = cfg.trajectories;
  std::vector<std::array<Eigen::Matrix4cd, 2>> samples(m);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t traj) {
    const NoiseRealization nr =
        NoiseRealization::draw(protocol.xi, dtn, protocol.t_start(), protocol.t_end(),
                               cfg.seed, traj);
    const DenseChainState fin = trajectory_evolve(spec, protocol, nr, dtp, &init);
    samples[traj][0] = reduced_rdm(fin, 0, 1);
    samples[traj][1] = reduced_rdm(fin, 0, 2);
  });

  TrajectoryEnsemble out;
  out.trajectories = m;
  for (int ri = 0; ri < 2; ++ri) {
    std::vector<Eigen::Matrix4cd> per_traj(m);
    for (int i = 0; i < m; ++i) per_traj[i] = samples[i][ri];
    const Eigen::Matrix4cd total = pairwise_sum(per_traj, 0, per_traj.size());
    const Eigen::Matrix4cd mean = total / static_cast<double>(m);
    out.rdm_mean[ri] = mean;

    Eigen::Matrix4d var_re = Eigen::Matrix4d::Zero(), var_im = Eigen::Matrix4d::Zero();
    for (int i = 0; i < m; ++i) {
      const Eigen::Matrix4cd d = per_traj[i] - mean;
      var_re += d.real().cwiseProduct(d.real());
      var_im += d.imag().cwiseProduct(d.imag());
    }
    const double scale = 1.0 / (static_cast<double>(m) * (m - 1));
    Eigen::Matrix4cd se;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        se(a, b) = {std::sqrt(var_re(a, b) * scale), std::sqrt(var_im(a, b) * scale)};
    out.rdm_stderr[ri] = se;

    // measures of the averaged state; jackknife errors for the nonlinear map
    const MeasureValues mv = measures_of(mean, ri + 1);
    out.measure_mean[ri] = mv;
    std::vector<MeasureValues> loo(m);
    const double inv = 1.0 / (m - 1.0);
    for (int i = 0; i < m; ++i)
      loo[i] = measures_of((total - per_traj[i]) * inv, ri + 1);
    MeasureValues jmean{};
    for (const auto& v : loo) {
      jmean.qfi += v.qfi / m;
      jmean.lqc_x += v.lqc_x / m;
      jmean.lqc_y += v.lqc_y / m;
      jmean.lqc_z += v.lqc_z / m;
    }
    MeasureValues jvar{};
    for (const auto& v : loo) {
      jvar.qfi += (v.qfi - jmean.qfi) * (v.qfi - jmean.qfi);
      jvar.lqc_x += (v.lqc_x - jmean.lqc_x) * (v.lqc_x - jmean.lqc_x);
      jvar.lqc_y += (v.lqc_y - jmean.lqc_y) * (v.lqc_y - jmean.lqc_y);
      jvar.lqc_z += (v.lqc_z - jmean.lqc_z) * (v.lqc_z - jmean.lqc_z);
    }
    const double jscale = (m - 1.0) / m;
    out.measure_stderr[ri] = {std::sqrt(jscale * jvar.qfi), std::sqrt(jscale * jvar.lqc_x),
                              std::sqrt(jscale * jvar.lqc_y),
                              std::sqrt(jscale * jvar.lqc_z)};
  }
  return out;
}

}  // namespace xyq::oracle
