#include <iorobust/classical_io.hpp>
#include <iorobust/experiments.hpp>
#include <iorobust/lp.hpp>
#include <iorobust/robust.hpp>

#include <benchmark/benchmark.h>

#include <map>
#include <utility>

using namespace iorobust;

namespace {

// Generated once per (m, n, K) and reused across iterations.
const Dataset& dataset(Eigen::Index m, Eigen::Index n, std::size_t K) {
  static std::map<std::tuple<Eigen::Index, Eigen::Index, std::size_t>, Dataset> cache;
  auto it = cache.find({m, n, K});
  if (it == cache.end()) {
    ExperimentConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.K_values = {K};
    cfg.L = 1;
    it = cache.emplace(std::make_tuple(m, n, K), generate_dataset(cfg)).first;
  }
  return it->second;
}

void BM_ForwardLP(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Dataset& data = dataset(10, n, 1);
  const StandardFormLP lp = data.problem.with(data.validation[0].b, data.truth->c_true);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(BM_ForwardLP)->Arg(50)->Arg(150)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_RobustCounterpart(benchmark::State& state) {
  const auto K = static_cast<std::size_t>(state.range(0));
  const auto form = state.range(1) == 0 ? RobustFormulation::Reduced : RobustFormulation::Full;
  const Dataset& data = dataset(10, 150, K);
  const ObservationSet obs = data.training_set();
  RobustOptions options;
  options.certify = false;
  options.formulation = form;
  for (auto _ : state) benchmark::DoNotOptimize(solve_rlo(obs, data.validation[0].b, options));
}
BENCHMARK(BM_RobustCounterpart)
    ->ArgsProduct({{10, 50, 130}, {0}})
    ->Args({10, 1})
    ->Unit(benchmark::kMillisecond);

void BM_ClassicalIO(benchmark::State& state) {
  const auto K = static_cast<std::size_t>(state.range(0));
  const auto norm = static_cast<Norm>(state.range(1));
  const Dataset& data = dataset(10, 150, K);
  const ObservationSet obs = data.training_set();
  IOConfig cfg;
  cfg.norm = norm;
  cfg.c_hat = Vector::Constant(150, 1.0 / 150.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_io(obs, cfg));
}
BENCHMARK(BM_ClassicalIO)
    ->Args({10, static_cast<long>(Norm::L2)})
    ->Args({50, static_cast<long>(Norm::L2)})
    ->Args({10, static_cast<long>(Norm::L1)})
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
