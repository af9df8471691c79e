#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>

namespace gpnode::service {

inline constexpr std::size_t kRollingWindow = 100;

/// Point-in-time copy of a slot's counters and gauges. Durations in seconds.
struct Metrics {
  std::uint64_t received_quantity = 0;
  std::uint64_t stored_quantity = 0;
  std::uint64_t malformed_quantity = 0;
  std::uint64_t command_quantity = 0;
  std::uint64_t replies_sent = 0;
  std::uint64_t send_failures = 0;
  std::uint64_t dropped_samples = 0;
  std::optional<double> last_command_value;
  double last_read_time = 0.0;
  double last_compute_time = 0.0;
  double last_send_time = 0.0;
  double mean_read_time = 0.0;
  double mean_compute_time = 0.0;
  double mean_send_time = 0.0;
  std::size_t leaves = 0;
  std::size_t depth = 0;
};

/// Fixed-size running mean over the last `kRollingWindow` observations.
class RollingMean {
 public:
  void push(double v) noexcept;
  double mean() const noexcept { return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_); }
  void clear() noexcept { *this = RollingMean{}; }

 private:
  std::array<double, kRollingWindow> ring_{};
  std::size_t next_ = 0;
  std::size_t count_ = 0;
  double sum_ = 0.0;
};

/// Written by one pipeline, read by any number of admin threads. Writers hold
/// the lock only to publish the outcome of one datagram.
class MetricsRecorder {
 public:
  struct Timings {
    double read = 0.0;
    double compute = 0.0;
    double send = 0.0;
  };

  void record_command(double value, std::size_t leaves);
  void record_malformed(double read_time);
  void record_sample(const Timings& t, bool stored, bool sent, std::size_t stored_points, std::size_t leaves,
                     std::size_t depth);
  /// Tree replaced (GP switch toggled): stored count follows the fresh tree.
  void record_new_tree();

  Metrics snapshot() const;

 private:
  mutable std::mutex mu_;
  Metrics m_;
  RollingMean read_;
  RollingMean compute_;
  RollingMean send_;
};

}  // namespace gpnode::service
