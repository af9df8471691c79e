#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpnode/client/dataset.hpp"

namespace gpnode::client {

struct StreamSpec {
  std::string source = "toy-sine";  // CSV path or "toy-sine"
  std::size_t d_in = 1;             // toy-sine only
  double noise_std = 0.1;           // toy-sine only
  std::uint64_t seed = 1;           // toy-sine only
  double rate_hz = 200.0;
  std::size_t count = 1000;
  std::string target = "127.0.0.1:8000";  // service read endpoint
  std::string listen = "127.0.0.1:8050";  // where replies arrive
  std::chrono::duration<double> reply_timeout = std::chrono::seconds(1);

  void validate() const;
};

struct SampleRecord {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> y_true;
  std::vector<double> mu;  // empty when unmatched
  double rtt = 0.0;        // seconds, 0 when unmatched
  bool matched = false;
};

struct Summary {
  std::size_t sent = 0;
  std::size_t received = 0;
  std::size_t lost = 0;
  std::size_t tail_k = 0;
  double rmse_overall = 0.0;
  double rmse_tail = 0.0;
  double rtt_p50 = 0.0;
  double rtt_p90 = 0.0;
  double rtt_p99 = 0.0;
  double rtt_max = 0.0;
  double wall_time = 0.0;
};

struct ReplyLog {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::vector<SampleRecord> records;
  std::size_t stray_replies = 0;  // unknown timestamp, late, or wrong length
  double wall_time = 0.0;         // first send to end of listening, seconds
  std::optional<std::string> error;

  /// `tail_k` defaults to max(1, 20% of the records).
  Summary summary(std::optional<std::size_t> tail_k = std::nullopt) const;
};

/// Parses "a.b.c.d:port". Throws Error(invalid_config).
std::pair<std::string, int> parse_host_port(const std::string& text);

/// The dataset a spec refers to, truncated to `count` rows.
Dataset resolve_source(const StreamSpec& spec);

/// Sends `count` samples at `rate_hz` while a second thread collects the
/// replies and pairs them with requests by timestamp bits. Anything
/// unanswered `reply_timeout` after it was sent counts as lost.
/// Socket failures end the run early with `error` set.
ReplyLog stream(const StreamSpec& spec);
ReplyLog stream(const StreamSpec& spec, const Dataset& data);

/// Sends the -1 command, waits one reply_timeout, calls `after_reset(run)`
/// if given, then streams. Repeated `runs` times with the same data.
std::vector<ReplyLog> monte_carlo(const StreamSpec& spec, std::size_t runs,
                                  const std::function<void(std::size_t)>& after_reset = {});

/// Sends one command datagram to `target`.
void send_command(const std::string& target, double value = -1.0);

}  // namespace gpnode::client
