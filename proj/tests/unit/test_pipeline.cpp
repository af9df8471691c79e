#include <bit>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gpnode/gp/kernel.hpp"
#include "gpnode/service/pipeline.hpp"
#include "gpnode/wire/protocol.hpp"

using namespace gpnode;
using service::DatagramClass;
using service::MetricsRecorder;
using service::Pipeline;

namespace {

tree::TreeConfig toy_config(std::size_t max_leaves = 4, std::size_t n_bar = 16) {
  tree::TreeConfig cfg;
  cfg.max_leaves = max_leaves;
  cfg.max_local_data = n_bar;
  cfg.hp = gp::make_isotropic(1, 1, 1.0, 0.5, 0.2);
  return cfg;
}

}  // namespace

TEST(Pipeline, FirstSampleRepliesWithSinglePointPosterior) {
  MetricsRecorder metrics;
  Pipeline pipe(toy_config(), metrics);
  const double x = 0.3, y = 2.0, t = 123.456;
  const auto reply = pipe.handle_datagram(wire::encode_sample(std::vector{x}, std::vector{y}, t));
  ASSERT_TRUE(reply.has_value());
  const auto r = wire::decode_reply(*reply, 1);
  // One point: mu(x) = k(x,x) * y / (k(x,x) + sigma_n^2) = 1 * 2 / 1.04.
  EXPECT_NEAR(r.mu[0], 2.0 / 1.04, 1e-15);
  EXPECT_EQ(wire::bits_of(r.t), wire::bits_of(t));
  EXPECT_EQ(pipe.last_class(), DatagramClass::sample);

  const auto m = metrics.snapshot();
  EXPECT_EQ(m.received_quantity, 1u);
  EXPECT_EQ(m.stored_quantity, 1u);
  EXPECT_EQ(m.replies_sent, 1u);
  EXPECT_GE(m.last_compute_time, 0.0);
}

TEST(Pipeline, ResetCommandEmptiesTreeWithoutReply) {
  MetricsRecorder metrics;
  Pipeline pipe(toy_config(), metrics);
  for (int i = 0; i < 10; ++i) pipe.handle_datagram(wire::encode_sample(std::vector{0.1 * i}, std::vector{1.0}, i));
  EXPECT_EQ(metrics.snapshot().stored_quantity, 10u);

  const auto reply = pipe.handle_datagram(wire::encode_command(-1.0));
  EXPECT_FALSE(reply.has_value());
  EXPECT_EQ(pipe.last_class(), DatagramClass::command);
  const auto m = metrics.snapshot();
  EXPECT_EQ(m.stored_quantity, 0u);
  EXPECT_EQ(m.received_quantity, 11u);
  EXPECT_EQ(m.command_quantity, 1u);
  EXPECT_EQ(m.last_command_value, -1.0);
  EXPECT_EQ(pipe.tree().stats().stored_points, 0u);
}

TEST(Pipeline, MalformedCountedNotAnswered) {
  MetricsRecorder metrics;
  Pipeline pipe(toy_config(), metrics);
  int sink_calls = 0;
  const Pipeline::ReplySink sink = [&](std::span<const std::byte>) {
    ++sink_calls;
    return true;
  };
  EXPECT_FALSE(pipe.handle_datagram(wire::Bytes(9), sink).has_value());
  EXPECT_EQ(pipe.last_class(), DatagramClass::malformed);
  const auto m = metrics.snapshot();
  EXPECT_EQ(m.malformed_quantity, 1u);
  EXPECT_EQ(m.received_quantity, 1u);
  EXPECT_EQ(sink_calls, 0);
  // Loop keeps working.
  EXPECT_TRUE(pipe.handle_datagram(wire::encode_sample(std::vector{0.0}, std::vector{0.0}, 1.0), sink));
  EXPECT_EQ(sink_calls, 1);
}

TEST(Pipeline, SendFailureIsCountedNotFatal) {
  MetricsRecorder metrics;
  Pipeline pipe(toy_config(), metrics);
  const Pipeline::ReplySink failing = [](std::span<const std::byte>) { return false; };
  EXPECT_TRUE(pipe.handle_datagram(wire::encode_sample(std::vector{0.0}, std::vector{0.0}, 1.0), failing));
  const auto m = metrics.snapshot();
  EXPECT_EQ(m.send_failures, 1u);
  EXPECT_EQ(m.replies_sent, 0u);
  EXPECT_EQ(m.received_quantity, 1u);
}

TEST(Pipeline, ReplyReflectsLearnedSample) {
  MetricsRecorder metrics;
  Pipeline pipe(toy_config(1, 100), metrics);
  tree::LogGPTree reference(toy_config(1, 100));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = std::sin(6 * x);
    reference.insert(std::vector{x}, std::vector{y});
    const auto reply = pipe.handle_datagram(wire::encode_sample(std::vector{x}, std::vector{y}, i));
    ASSERT_TRUE(reply);
    EXPECT_EQ(wire::decode_reply(*reply, 1).mu, reference.predict(std::vector{x}));
  }
}

TEST(Pipeline, SaturationMakesReceivedExceedStored) {
  MetricsRecorder metrics;
  Pipeline pipe(toy_config(2, 16), metrics);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) pipe.handle_datagram(wire::encode_sample(std::vector{u(rng)}, std::vector{0.0}, i));
  const auto m = metrics.snapshot();
  EXPECT_EQ(m.received_quantity, 200u);
  EXPECT_LE(m.stored_quantity, 32u);
  EXPECT_EQ(m.stored_quantity, pipe.tree().stats().stored_points);
  EXPECT_EQ(m.dropped_samples, 200u - m.stored_quantity);
}

TEST(Pipeline, TimestampEchoIncludesNaNPayloads) {
  MetricsRecorder metrics;
  Pipeline pipe(toy_config(), metrics);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t bits = rng();
    if (i % 4 == 0) bits |= 0x7ff0000000000000ULL;  // force NaN/Inf exponents
    const double t = std::bit_cast<double>(bits);
    const auto reply = pipe.handle_datagram(wire::encode_sample(std::vector{0.5}, std::vector{1.0}, t));
    ASSERT_TRUE(reply);
    ASSERT_EQ(wire::bits_of(wire::decode_reply(*reply, 1).t), bits);
  }
}

TEST(Metrics, RollingMeanWindow) {
  service::RollingMean rm;
  EXPECT_EQ(rm.mean(), 0.0);
  for (int i = 0; i < 50; ++i) rm.push(1.0);
  EXPECT_DOUBLE_EQ(rm.mean(), 1.0);
  for (int i = 0; i < 100; ++i) rm.push(3.0);
  EXPECT_DOUBLE_EQ(rm.mean(), 3.0);
  for (int i = 0; i < 50; ++i) rm.push(1.0);
  EXPECT_DOUBLE_EQ(rm.mean(), 2.0);
}

TEST(Metrics, FreshRecorderIsZero) {
  const MetricsRecorder m;
  const auto s = m.snapshot();
  EXPECT_EQ(s.received_quantity, 0u);
  EXPECT_EQ(s.stored_quantity, 0u);
  EXPECT_EQ(s.malformed_quantity, 0u);
  EXPECT_FALSE(s.last_command_value.has_value());
}
