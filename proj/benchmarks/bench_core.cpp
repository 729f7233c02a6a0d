#include <benchmark/benchmark.h>

#include <random>

#include "uavtw/channel.hpp"
#include "uavtw/energy.hpp"
#include "uavtw/planner.hpp"
#include "uavtw/velocity.hpp"

namespace {

using namespace uavtw;

// Users uniform in a 400 m square; deadlines never bind, so every search runs
// to completion.
Scenario make_scenario(std::size_t k, std::uint64_t seed, double eta = 1e9) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 400.0);
  ScenarioData d;
  d.depot = {1.5, 398.0};
  d.uav = with_hover_speed(d.uav, d.power);
  for (std::size_t i = 0; i < k; ++i)
    d.users.push_back({static_cast<int>(i + 1), {pos(rng), pos(rng)}, 10e6, eta});
  return Scenario(d);
}

void BM_Exhaustive(benchmark::State& state) {
  const auto s = make_scenario(static_cast<std::size_t>(state.range(0)), 1);
  const auto inst = make_instance(s, 45.0);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_search(inst));
}
BENCHMARK(BM_Exhaustive)->DenseRange(4, 9)->Unit(benchmark::kMicrosecond);

void BM_Dp(benchmark::State& state) {
  const auto s = make_scenario(static_cast<std::size_t>(state.range(0)), 1);
  const auto inst = make_instance(s, 45.0);
  for (auto _ : state) benchmark::DoNotOptimize(dp_search(inst));
}
BENCHMARK(BM_Dp)->DenseRange(4, 16, 2)->Unit(benchmark::kMicrosecond);

void BM_Heuristic(benchmark::State& state) {
  const auto s = make_scenario(static_cast<std::size_t>(state.range(0)), 1);
  const auto inst = make_instance(s, 45.0);
  for (auto _ : state) benchmark::DoNotOptimize(heuristic_search(inst));
}
BENCHMARK(BM_Heuristic)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMicrosecond);

void BM_Tsp(benchmark::State& state) {
  const auto s = make_scenario(static_cast<std::size_t>(state.range(0)), 1);
  const auto inst = make_instance(s, 45.0);
  for (auto _ : state) benchmark::DoNotOptimize(tsp_baseline(inst));
}
BENCHMARK(BM_Tsp)->DenseRange(4, 14, 2)->Unit(benchmark::kMicrosecond);

// Speed optimization along the shortest tour, deadlines loose.
void BM_OptimizeVelocities(benchmark::State& state) {
  const auto s = make_scenario(static_cast<std::size_t>(state.range(0)), 3, 1e4);
  const Tour tour = tsp_baseline(make_instance(s, 45.0)).tours.at(0);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_velocities(tour, s));
}
BENCHMARK(BM_OptimizeVelocities)->DenseRange(2, 10, 4)->Unit(benchmark::kMicrosecond);

void BM_MarcumQuantile(benchmark::State& state) {
  const double g = std::pow(10.0, static_cast<double>(state.range(0)) / 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(marcum_y_quantile(g, 1e-3));
}
BENCHMARK(BM_MarcumQuantile)->Arg(10)->Arg(20)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
