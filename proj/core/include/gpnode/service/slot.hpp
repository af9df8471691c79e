#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>

#include "gpnode/service/endpoint.hpp"
#include "gpnode/service/metrics.hpp"
#include "gpnode/service/pipeline.hpp"
#include "gpnode/service/preset.hpp"
#include "gpnode/net/udp_socket.hpp"
#include "gpnode/tree/loggp_tree.hpp"

namespace gpnode::service {

struct SlotState {
  int id = 0;
  tree::TreeConfig tree_config;
  EndpointConfig endpoint;
  std::string preset;  // last applied preset name, empty if none
  bool udp_active = false;
  bool gp_active = false;
  bool running = false;
  std::string last_error;
};

/// One model slot: endpoint settings, two activation switches, the running
/// flag, and (while the GP switch is on) a pipeline with its tree.
///
/// - UDP on binds the read socket and opens the send socket; endpoint edits
///   are rejected while it is on.
/// - GP on builds a fresh empty tree, discarding any previous one; tree
///   config and preset edits are rejected while it is on.
/// - start requires both switches; turning either off stops the loop.
///
/// Admin calls are serialized against each other and take effect between
/// datagrams. Metrics snapshots never wait on the model.
class ModelSlot {
 public:
  ModelSlot(int id, tree::TreeConfig cfg, EndpointConfig endpoint);
  ~ModelSlot();
  ModelSlot(const ModelSlot&) = delete;
  ModelSlot& operator=(const ModelSlot&) = delete;

  int id() const noexcept { return id_; }
  SlotState state() const;

  void set_endpoint(const EndpointConfig& endpoint);
  void set_tree_config(const tree::TreeConfig& cfg);
  void apply_preset(const Preset& preset);

  void activate_udp();
  void deactivate_udp();
  void activate_gp();
  void deactivate_gp();

  void start();
  void stop();
  bool running() const noexcept { return running_.load(); }

  Metrics metrics_snapshot() const { return metrics_.snapshot(); }
  /// Stats of the live tree, or nullopt while the GP switch is off.
  std::optional<tree::TreeStats> tree_stats() const;

  /// Runs one datagram through the pipeline on the caller's thread, replying
  /// through the send socket when UDP is on. Requires the GP switch.
  std::optional<wire::Bytes> handle_datagram(std::span<const std::byte> bytes);

  /// Bound read port (useful when configured as an ephemeral port in tests).
  std::optional<int> bound_read_port() const;

 private:
  void run_loop();
  void stop_locked();
  void fail(const std::string& message);
  bool send_reply(std::span<const std::byte> reply);

  const int id_;
  mutable std::mutex ctl_mu_;   // admin operations
  mutable std::mutex pipe_mu_;  // pipeline, tree and sockets used by the loop
  tree::TreeConfig cfg_;
  EndpointConfig endpoint_;
  std::string preset_;
  std::string last_error_;
  bool udp_active_ = false;
  std::unique_ptr<Pipeline> pipeline_;
  std::optional<net::UdpSocket> read_socket_;
  std::optional<net::UdpSocket> send_socket_;
  sockaddr_in send_addr_{};
  MetricsRecorder metrics_;
  std::atomic<bool> running_{false};
  std::atomic<bool> stop_requested_{false};
  std::thread worker_;
};

}  // namespace gpnode::service
