#include <vector>

#include <benchmark/benchmark.h>

#include "gpnode/wire/protocol.hpp"

using namespace gpnode::wire;

namespace {

void BM_DecodeSample(benchmark::State& state) {
  const auto d_in = static_cast<std::size_t>(state.range(0));
  const std::vector<double> x(d_in, 0.25), y(1, 1.5);
  const Bytes bytes = encode_sample(x, y, 42.0);
  for (auto _ : state) benchmark::DoNotOptimize(decode_datagram(bytes, d_in, 1));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_DecodeSample)->Arg(1)->Arg(21)->Arg(32);

void BM_EncodeReply(benchmark::State& state) {
  const std::vector<double> mu(static_cast<std::size_t>(state.range(0)), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(encode_reply(mu, 42.0));
}
BENCHMARK(BM_EncodeReply)->Arg(1)->Arg(7);

void BM_DecodeMalformed(benchmark::State& state) {
  const Bytes bytes(13);
  for (auto _ : state) benchmark::DoNotOptimize(decode_datagram(bytes, 1, 1));
}
BENCHMARK(BM_DecodeMalformed);

}  // namespace
