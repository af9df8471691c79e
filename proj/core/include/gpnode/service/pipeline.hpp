#pragma once

#include <functional>
#include <optional>
#include <span>

#include "gpnode/service/metrics.hpp"
#include "gpnode/tree/loggp_tree.hpp"
#include "gpnode/wire/protocol.hpp"

namespace gpnode::service {

enum class DatagramClass { command, sample, malformed };

/// Learn-then-predict handling of one slot's datagrams, in arrival order.
///
/// The pipeline owns the tree. Counters and gauges go to the recorder passed
/// in, which may be read concurrently from other threads.
class Pipeline {
 public:
  /// Delivers a reply; returns false when the send failed.
  using ReplySink = std::function<bool(std::span<const std::byte>)>;

  Pipeline(tree::TreeConfig cfg, MetricsRecorder& metrics, int slot_id = 0);

  /// Decode, then: Command -> reset tree, no reply; Sample -> insert, predict,
  /// encode reply and hand it to `sink`; Malformed -> count and log, no reply.
  /// `read_time` is the socket read duration already spent on this datagram.
  /// Returns the reply bytes for samples.
  std::optional<wire::Bytes> handle_datagram(std::span<const std::byte> bytes, const ReplySink& sink = {},
                                             double read_time = 0.0);

  const tree::LogGPTree& tree() const noexcept { return tree_; }
  DatagramClass last_class() const noexcept { return last_class_; }

 private:
  tree::LogGPTree tree_;
  MetricsRecorder& metrics_;
  int slot_id_;
  DatagramClass last_class_ = DatagramClass::malformed;
};

std::string_view to_string(DatagramClass c) noexcept;

}  // namespace gpnode::service
