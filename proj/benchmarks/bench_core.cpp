#include <benchmark/benchmark.h>

#include "adaptnet/model.hpp"
#include "adaptnet/numerics.hpp"
#include "adaptnet/policy.hpp"
#include "adaptnet/strategy.hpp"
#include "adaptnet/topology.hpp"

using namespace adaptnet;

namespace {

void BM_DistributedStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto t = random_geometric(n, 0.4, 1);
  const auto model = identity_regressor_model(random_parameter(m, 2), log_uniform_noise_profile(n, 1e-3, 1e-1, 3));
  const auto policy = assemble(StrategyKind::kAtc, build_metropolis(t), t);
  const auto perron = perron_data(policy, Vector::Constant(static_cast<Eigen::Index>(n), 1e-3));
  DistributedEngine engine(policy, perron, model);
  NetworkState s = NetworkState::zeros(n, m);
  Rng rng(4);
  for (auto _ : state) {
    engine.step(s, rng);
    benchmark::DoNotOptimize(s.w.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DistributedStep)->Args({10, 5})->Args({30, 10})->Args({100, 10});

void BM_LyapunovContinuous(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  Matrix h = Matrix::Random(m, m) * 0.3;
  h += (1.0 - min_real_eigenvalue(h)) * Matrix::Identity(m, m);
  const Matrix s = Matrix::Identity(m, m);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov_continuous(h, s));
}
BENCHMARK(BM_LyapunovContinuous)->Arg(5)->Arg(10)->Arg(20);

void BM_PerronVector(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = random_geometric(n, 2.0 / std::sqrt(static_cast<double>(n)), 5);
  Vector target = log_uniform_noise_profile(n, 1.0, 10.0, 6);
  target /= target.sum();
  const Matrix a = build_hastings(t, target);
  for (auto _ : state) benchmark::DoNotOptimize(perron_vector(a));
}
BENCHMARK(BM_PerronVector)->Arg(10)->Arg(30)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
