#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gpnode/gp/kernel.hpp"
#include "gpnode/gp/local_gp.hpp"

using namespace gpnode::gp;

namespace {

std::vector<std::vector<double>> points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  for (auto& p : out) {
    for (auto& v : p) v = u(rng);
  }
  return out;
}

void BM_Kernel(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto hp = make_isotropic(dim, 1, 1.0, 0.5, 0.1);
  const auto xs = points(2, dim, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_eval(xs[0], xs[1], hp));
}
BENCHMARK(BM_Kernel)->Arg(1)->Arg(8)->Arg(21)->Arg(32);

// Grows a model to range(0) points; reports the cost of the last append.
void BM_AddPoint(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto hp = make_isotropic(4, 1, 1.0, 0.5, 0.1);
  const auto xs = points(n + 1, 4, 2);
  const std::vector<std::vector<double>> ys(n, std::vector<double>{0.5});
  const auto base = LocalGP::fit(std::span(xs).first(n), ys, hp);
  const std::vector<double> y{0.25};
  for (auto _ : state) {
    state.PauseTiming();
    LocalGP model = base;
    state.ResumeTiming();
    model.add_point(xs[n], y);
    benchmark::DoNotOptimize(model.size());
  }
}
BENCHMARK(BM_AddPoint)->Arg(16)->Arg(64)->Arg(200);

void BM_PredictMean(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto hp = make_isotropic(4, 1, 1.0, 0.5, 0.1);
  const auto xs = points(n, 4, 3);
  const std::vector<std::vector<double>> ys(n, std::vector<double>{0.5});
  const auto model = LocalGP::fit(xs, ys, hp);
  const auto probe = points(1, 4, 4)[0];
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_mean(probe));
}
BENCHMARK(BM_PredictMean)->Arg(16)->Arg(64)->Arg(200);

}  // namespace
