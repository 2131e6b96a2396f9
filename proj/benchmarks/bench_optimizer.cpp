#include <benchmark/benchmark.h>

#include "qeed/library.hpp"
#include "qeed/optimizer.hpp"

namespace {

void BM_Cost(benchmark::State& state) {
  const qeed::PulseLibraryEntry& e = qeed::PulseLibrary::bundled().at("R1_all_3pi2");
  qeed::OptimizationConfig c;
  c.axes = e.robust_axes;
  c.extended = state.range(0) != 0;
  const qeed::Mat2 target = e.target();
  for (auto _ : state) benchmark::DoNotOptimize(qeed::cost(e.params, target, c));
}
BENCHMARK(BM_Cost)->Arg(0)->Arg(1);

void BM_OptimizeXpi(benchmark::State& state) {
  qeed::OptimizationConfig c;
  c.threads = static_cast<int>(state.range(0));
  const qeed::FourierPulseParams init =
      qeed::initial_params(3.141592653589793, 50.0, 3, -1, qeed::DriveScheme::AmplitudePhase, 1);
  const qeed::Mat2 target = qeed::rotation(qeed::Axis::X, 3.141592653589793);
  for (auto _ : state) benchmark::DoNotOptimize(qeed::optimize(init, target, c));
}
BENCHMARK(BM_OptimizeXpi)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
