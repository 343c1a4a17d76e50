#include <benchmark/benchmark.h>

#include <numbers>

#include "xyq/chain.hpp"
#include "xyq/correlators.hpp"
#include "xyq/evolve.hpp"
#include "xyq/measures.hpp"
#include "xyq/oracle.hpp"
#include "xyq/rdm.hpp"

using namespace xyq;
using std::numbers::pi;

namespace {

std::vector<ModeState> quenched_states(const std::vector<Mode>& modes) {
  std::vector<ModeState> states(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    states[i].u_abs2 = 0.05 + 0.4 * std::sin(modes[i].k) * std::sin(modes[i].k);
    states[i].vu_conj = std::polar(0.2, 3.0 * modes[i].k);
  }
  return states;
}

void BM_EvolveModeFullRamp(benchmark::State& state) {
  const double tau = static_cast<double>(state.range(0));
  Mode m{pi / 2, 0.0, 1.0};
  const RampProtocol prot{tau, 0.0, -30, 30};
  const IntegratorConfig cfg;
  for (auto _ : state) {
    ModeState s = initial_state(m, prot);
    s = evolve_mode(s, m, prot, cfg, prot.t_end());
    benchmark::DoNotOptimize(s.u_abs2);
  }
}
BENCHMARK(BM_EvolveModeFullRamp)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_NoisyEvolveMode(benchmark::State& state) {
  Mode m{pi / 2, 0.0, 1.0};
  const RampProtocol prot{10.0, 0.3, -30, 30};
  const IntegratorConfig cfg;
  for (auto _ : state) {
    ModeState s = initial_state(m, prot);
    s = evolve_mode(s, m, prot, cfg, prot.t_end());
    benchmark::DoNotOptimize(s.u_abs2);
  }
}
BENCHMARK(BM_NoisyEvolveMode)->Unit(benchmark::kMillisecond);

void BM_ContractionsN200(benchmark::State& state) {
  const ChainSpec spec{200, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  const auto states = quenched_states(modes);
  for (auto _ : state) {
    const ContractionTable t = contractions(modes, states, 3.0, 2, spec.n_sites);
    benchmark::DoNotOptimize(t.ab(1));
  }
}
BENCHMARK(BM_ContractionsN200);

void BM_RdmAndMeasures(benchmark::State& state) {
  const ChainSpec spec{200, 1.0, -30, 30};
  const auto modes = momentum_grid(spec);
  const auto states = quenched_states(modes);
  const SpinCorrelators corr =
      spin_correlators(contractions(modes, states, 3.0, 2, spec.n_sites));
  for (auto _ : state) {
    const MeasureResult m = evaluate_measures(assemble_rdm(corr, 1));
    benchmark::DoNotOptimize(m.qfi);
  }
}
BENCHMARK(BM_RdmAndMeasures);

void BM_OracleTrajectory(benchmark::State& state) {
  const ChainSpec spec{8, 1.0, -30, 30};
  const RampProtocol prot{0.5, 0.3, -30, 30};
  const auto init = oracle::ground_state(spec, prot.h_initial, prot.t_start());
  std::uint64_t stream = 0;
  for (auto _ : state) {
    const auto nr = oracle::NoiseRealization::draw(prot.xi, 0.01, prot.t_start(),
                                                   prot.t_end(), 1, stream++);
    const auto fin = oracle::trajectory_evolve(spec, prot, nr, 0.01, &init);
    benchmark::DoNotOptimize(fin.amp(0));
  }
}
BENCHMARK(BM_OracleTrajectory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
