#include <benchmark/benchmark.h>

#include "qeed/devices.hpp"

namespace {

void BM_CoupledTransmonHamiltonian(benchmark::State& state) {
  qeed::CoupledTransmonParams p;
  p.levels = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qeed::coupled_transmon_hamiltonian(p));
}
BENCHMARK(BM_CoupledTransmonHamiltonian)->Arg(3)->Arg(4);

void BM_ZZExact(benchmark::State& state) {
  const qeed::CoupledTransmonParams p;
  for (auto _ : state) benchmark::DoNotOptimize(qeed::zz_exact(p));
}
BENCHMARK(BM_ZZExact);

void BM_TransmonGate(benchmark::State& state) {
  const qeed::ControlPulse pulse = qeed::cosine_pulse_with_duration(3.141592653589793, 20.0);
  const qeed::TransmonParams t;
  const qeed::DeviceModel m = qeed::transmon_single(t, pulse, 3.141592653589793, 1.0 / 1.445);
  for (auto _ : state) benchmark::DoNotOptimize(m.fidelity());
}
BENCHMARK(BM_TransmonGate);

}  // namespace
