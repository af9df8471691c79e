#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gpnode/tree/loggp_tree.hpp"

using namespace gpnode;

namespace {

tree::TreeConfig config(std::size_t leaves, std::size_t local) {
  tree::TreeConfig cfg;
  cfg.max_leaves = leaves;
  cfg.max_local_data = local;
  cfg.hp = gp::make_isotropic(2, 1, 1.0, 0.2, 0.1);
  return cfg;
}

// One insert + predict cycle, the per-sample work of the service, on a
// tree that has already absorbed range(0) samples.
void BM_InsertPredict(benchmark::State& state) {
  tree::LogGPTree t(config(32, 64));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(2), y(1);
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    x = {u(rng), u(rng)};
    y = {x[0] * x[1]};
    t.insert(x, y);
  }
  for (auto _ : state) {
    x = {u(rng), u(rng)};
    y = {x[0] * x[1]};
    t.insert(x, y);
    benchmark::DoNotOptimize(t.predict(x));
  }
  state.counters["leaves"] = static_cast<double>(t.stats().leaves);
}
BENCHMARK(BM_InsertPredict)->Arg(0)->Arg(500)->Arg(2000);

void BM_Predict(benchmark::State& state) {
  tree::LogGPTree t(config(static_cast<std::size_t>(state.range(0)), 64));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    t.insert(x, std::vector<double>{x[0]});
  }
  const std::vector<double> probe{0.3, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(t.predict(probe));
  state.counters["leaves"] = static_cast<double>(t.stats().leaves);
}
BENCHMARK(BM_Predict)->Arg(4)->Arg(16)->Arg(64);

}  // namespace
