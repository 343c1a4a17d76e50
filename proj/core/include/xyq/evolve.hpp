#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "xyq/chain.hpp"

namespace xyq {

struct IntegratorConfig {
  enum class Method { adaptive, fixed_rk4 };

  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.0;  // 0 means auto: 0.1 * min(1, tau)
  Method method = Method::adaptive;
  double fixed_step = 1e-3;  // step size for Method::fixed_rk4

  void validate() const;
  double resolved_max_step(double tau) const;
};

// One mode's 2x2 density matrix in the fixed Nambu basis, plus the
// occupation/coherence amplitudes relative to the instantaneous eigenbasis
// at the field where it was last evaluated.
struct ModeState {
  Eigen::Matrix2cd rho;
  double t = 0.0;
  double u_abs2 = 0.0;               // <phi+|rho|phi+>
  std::complex<double> vu_conj{0.0, 0.0};  // <phi-|rho|phi+> = v_k u_k^*

  double purity() const { return (rho * rho).trace().real(); }
};

// Ground state of the mode at the ramp's starting field.
ModeState initial_state(const Mode& mode, const RampProtocol& protocol);

// (|u_k|^2, v_k u_k^*) of rho in the instantaneous eigenbasis at field h.
std::pair<double, std::complex<double>> extract_amplitudes(
    const Eigen::Matrix2cd& rho, const Mode& mode, double h);

// Integrates d rho/dt = -i[H_k(t), rho] - (xi^2/2)[s^z, [s^z, rho]] from
// state.t to t_target, H_k(t) = pair_hamiltonian(mode, t/tau). Amplitudes
// are refreshed at the target field.
ModeState evolve_mode(const ModeState& state, const Mode& mode,
                      const RampProtocol& protocol, const IntegratorConfig& cfg,
                      double t_target);

// All modes evolved once, states captured at each checkpoint time.
// Result is indexed [checkpoint][mode]; modes run concurrently but are
// gathered in ascending-k order.
std::vector<std::vector<ModeState>> evolve_chain(const ChainSpec& spec,
                                                 const RampProtocol& protocol,
                                                 const IntegratorConfig& cfg,
                                                 std::span<const double> checkpoints);

}  // namespace xyq
