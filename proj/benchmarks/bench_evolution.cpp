#include <benchmark/benchmark.h>

#include "collapse/criteria.hpp"
#include "collapse/diagnostics.hpp"
#include "collapse/evolution.hpp"

using namespace collapse;

namespace {

ProfileSpec gaussian(double k) {
  ProfileSpec s;
  s.kind = ProfileKind::gaussian;
  s.amplitude = {0.05, 0.0};
  s.center = 1.5;
  s.width = 0.2;
  s.phase_rate = k;
  return s;
}

CharacteristicData data_for(int n, double e) {
  PhysicalParams p;
  p.coupling = e;
  return build_characteristic_data(gaussian(e > 0 ? 3.0 : 0.0), {}, GridSpec{-1.0, -0.6, 1.0, 2.0, n, n}, p);
}

void BM_StepSlice(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CharacteristicData d = data_for(n, 0.5);
  std::vector<FieldPoint> prev(d.cone_c.points.begin() + d.cone_c.strip_offset, d.cone_c.points.end());
  for (auto _ : state) {
    StepResult r = step_slice(prev, d.cone_cbar.points[1], d.grid.hu(), d.grid.hv(), d.params);
    benchmark::DoNotOptimize(r.slice.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_StepSlice)->Arg(129)->Arg(513)->Arg(2049);

void BM_Evolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CharacteristicData d = data_for(n, state.range(1) ? 0.5 : 0.0);
  for (auto _ : state) {
    Solution s = evolve(d, StopPolicy::run_to_end);
    benchmark::DoNotOptimize(s.fields.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Evolve)->Args({129, 0})->Args({129, 1})->Args({257, 1})->Unit(benchmark::kMillisecond);

void BM_InitialData(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(data_for(static_cast<int>(state.range(0)), 0.5).eta0);
}
BENCHMARK(BM_InitialData)->Arg(257)->Arg(1025);

void BM_Monitors(benchmark::State& state) {
  const CharacteristicData d = data_for(257, 0.5);
  const Solution s = evolve(d, StopPolicy::run_to_end);
  for (auto _ : state) benchmark::DoNotOptimize(monitor_all(s, d, d.params).h);
}
BENCHMARK(BM_Monitors)->Unit(benchmark::kMillisecond);

void BM_GOmega(benchmark::State& state) {
  double acc = 0.0;
  for (auto _ : state) {
    for (int k = 1; k <= 30; ++k) acc += g_omega(0.3, 0.01 * k);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_GOmega);

}  // namespace
BENCHMARK_MAIN();
