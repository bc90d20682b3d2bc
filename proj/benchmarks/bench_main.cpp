#include "hetsync/perturb.hpp"
#include "hetsync/sim.hpp"
#include "hetsync/stability.hpp"

#include "fixtures.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace hetsync;

void BM_Expansion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const Network net = build_network(testing::random_graph(n, rng));
  const MismatchVector mm = project_mismatch(net, testing::random_delta(n, rng));
  const ModelSpec model = chua_local();
  const double sigma = 1.2 * model.msf.lower / net.gamma(0);
  for (auto _ : state) benchmark::DoNotOptimize(expand_eigenvalues(assemble(net, mm, model, sigma)));
}
BENCHMARK(BM_Expansion)->Arg(3)->Arg(8)->Arg(16)->Arg(32);

void BM_DirectContour(benchmark::State& state) {
  const Network net = build_network(testing::complete_graph(3));
  const MismatchVector mm = project_mismatch(net, testing::fig2_delta());
  const auto sigma = testing::linspace_step(1.2, 0.05, 40);
  const auto eps = testing::linspace_step(-0.2, 0.02, 21);
  for (auto _ : state) benchmark::DoNotOptimize(direct_contour(net, mm, chua_local(), sigma, eps));
}
BENCHMARK(BM_DirectContour)->Unit(benchmark::kMillisecond);

void BM_PerturbativeContour(benchmark::State& state) {
  const Network net = build_network(testing::complete_graph(3));
  const MismatchVector mm = project_mismatch(net, testing::fig2_delta());
  const auto sigma = testing::linspace_step(1.2, 0.05, 40);
  const auto eps = testing::linspace_step(-0.2, 0.02, 21);
  for (auto _ : state) benchmark::DoNotOptimize(perturbation_intervals(net, mm, chua_local(), sigma, eps));
}
BENCHMARK(BM_PerturbativeContour)->Unit(benchmark::kMillisecond);

// Cost per simulated time unit of the three-node Chua network.
void BM_ChuaSimulation(benchmark::State& state) {
  const Network net = build_network(testing::complete_graph(3));
  const MismatchVector mm = project_mismatch(net, testing::fig2_delta());
  SimConfig cfg;
  cfg.t_transient = 0.0;
  cfg.t_average = 10.0;
  cfg.prerun_time = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(net, mm, chua_local(), 2.5, 0.1, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.t_average / cfg.dt));
}
BENCHMARK(BM_ChuaSimulation)->Unit(benchmark::kMillisecond);

void BM_BernoulliSimulation(benchmark::State& state) {
  const Network net = build_network(testing::fig4_adjacency());
  const MismatchVector mm = project_mismatch(net, testing::fig4_delta());
  SimConfig cfg;
  cfg.map_transient = 0;
  cfg.map_average = 10'000;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(net, mm, bernoulli(), 0.25, 0.1, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.map_average);
}
BENCHMARK(BM_BernoulliSimulation)->Unit(benchmark::kMillisecond);

void BM_Mle(benchmark::State& state) {
  const std::vector<double> grid = testing::linspace_step(-6.0, 0.01, 1201);
  for (auto _ : state) benchmark::DoNotOptimize(mle_curve(optoelectronic(), grid, 1'000'000, 1000, 1));
}
BENCHMARK(BM_Mle)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
