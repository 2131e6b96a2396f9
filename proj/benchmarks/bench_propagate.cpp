#include <benchmark/benchmark.h>

#include "qeed/curve_library.hpp"
#include "qeed/geometry.hpp"
#include "qeed/library.hpp"
#include "qeed/model.hpp"
#include "qeed/robustness.hpp"

namespace {

void BM_Propagate(benchmark::State& state) {
  const qeed::ControlPulse p = qeed::PulseLibrary::bundled().at("R1_all_3pi2").pulse();
  const qeed::Hamiltonian2 h = qeed::drive_hamiltonian(p);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qeed::propagate_final(h, p.duration(), steps));
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_Propagate)->Arg(1000)->Arg(4000)->Arg(16000);

void BM_ErrorCurve(benchmark::State& state) {
  const qeed::ControlPulse p = qeed::PulseLibrary::bundled().at("R1_perp_7pi4").pulse();
  const qeed::Trajectory2 tr = qeed::propagate(qeed::drive_hamiltonian(p), p.duration(), 4000);
  for (auto _ : state) benchmark::DoNotOptimize(qeed::build_qeed(tr, {qeed::Axis::X, qeed::Axis::Y, qeed::Axis::Z}));
}
BENCHMARK(BM_ErrorCurve);

void BM_Magnus(benchmark::State& state) {
  const qeed::ControlPulse p = qeed::PulseLibrary::bundled().at("R1_perp_7pi4").pulse();
  const qeed::ErrorCurve c =
      qeed::error_curve(qeed::propagate(qeed::drive_hamiltonian(p), p.duration(), 4000), qeed::Axis::Z);
  for (auto _ : state) benchmark::DoNotOptimize(qeed::magnus_coefficients(c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Magnus)->DenseRange(1, 4);

void BM_CurveToPulse(benchmark::State& state) {
  const qeed::LibraryCurve lc = qeed::curve_library("R2_perp_pi4");
  for (auto _ : state) benchmark::DoNotOptimize(qeed::curve_to_pulse(lc.curve, 50.0));
}
BENCHMARK(BM_CurveToPulse);

}  // namespace
