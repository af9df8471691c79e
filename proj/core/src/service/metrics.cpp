#include "gpnode/service/metrics.hpp"

namespace gpnode::service {

void RollingMean::push(double v) noexcept {
  if (count_ == kRollingWindow) {
    sum_ -= ring_[next_];
  } else {
    ++count_;
  }
  ring_[next_] = v;
  sum_ += v;
  next_ = (next_ + 1) % kRollingWindow;
  // Re-sum once per lap so cancellation error cannot accumulate.
  if (next_ == 0) {
    sum_ = 0.0;
    for (double e : ring_) sum_ += e;
  }
}

void MetricsRecorder::record_command(double value, std::size_t leaves) {
  std::lock_guard lock(mu_);
  ++m_.received_quantity;
  ++m_.command_quantity;
  m_.last_command_value = value;
  m_.stored_quantity = 0;
  m_.leaves = leaves;
  m_.depth = 0;
}

void MetricsRecorder::record_malformed(double read_time) {
  std::lock_guard lock(mu_);
  ++m_.received_quantity;
  ++m_.malformed_quantity;
  m_.last_read_time = read_time;
  read_.push(read_time);
  m_.mean_read_time = read_.mean();
}

void MetricsRecorder::record_sample(const Timings& t, bool stored, bool sent, std::size_t stored_points,
                                    std::size_t leaves, std::size_t depth) {
  std::lock_guard lock(mu_);
  ++m_.received_quantity;
  if (!stored) ++m_.dropped_samples;
  if (sent) {
    ++m_.replies_sent;
  } else {
    ++m_.send_failures;
  }
  m_.stored_quantity = stored_points;
  m_.leaves = leaves;
  m_.depth = depth;
  m_.last_read_time = t.read;
  m_.last_compute_time = t.compute;
  m_.last_send_time = t.send;
  read_.push(t.read);
  compute_.push(t.compute);
  send_.push(t.send);
  m_.mean_read_time = read_.mean();
  m_.mean_compute_time = compute_.mean();
  m_.mean_send_time = send_.mean();
}

void MetricsRecorder::record_new_tree() {
  std::lock_guard lock(mu_);
  m_.stored_quantity = 0;
  m_.leaves = 1;
  m_.depth = 0;
}

Metrics MetricsRecorder::snapshot() const {
  std::lock_guard lock(mu_);
  return m_;
}

}  // namespace gpnode::service
