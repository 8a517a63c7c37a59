#include <benchmark/benchmark.h>

#include <vector>

#include "cwphase/cwphase.hpp"

namespace {

const cwphase::ModelParams kDefault{1.2, 12.0};

void BM_MomentSums(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cwphase::moment_sums(x, kDefault, 6.0));
}
BENCHMARK(BM_MomentSums)->Arg(-4)->Arg(0)->Arg(4)->Arg(12);

void BM_StationaryPoints(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cwphase::stationary_points({6.0, -1.890291}, kDefault));
}
BENCHMARK(BM_StationaryPoints);

void BM_CoexistenceMu(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cwphase::coexistence_mu(6.0, kDefault));
}
BENCHMARK(BM_CoexistenceMu)->Unit(benchmark::kMillisecond);

void BM_CriticalPoint(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cwphase::critical_point(kDefault));
}
BENCHMARK(BM_CriticalPoint)->Unit(benchmark::kMillisecond);

void BM_ExactLogXi(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cwphase::exact_log_xi(cells, {2.0, -1.0}, kDefault));
  state.SetComplexityN(cells);
}
BENCHMARK(BM_ExactLogXi)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond)->Complexity();

void BM_LaplaceLogXi(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cwphase::laplace_log_xi(cells, {2.0, -1.0}, kDefault));
}
BENCHMARK(BM_LaplaceLogXi)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
