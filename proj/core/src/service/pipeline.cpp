#include "gpnode/service/pipeline.hpp"

#include <chrono>

#include <spdlog/spdlog.h>

namespace gpnode::service {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(DatagramClass c) noexcept {
  switch (c) {
    case DatagramClass::command: return "command";
    case DatagramClass::sample: return "sample";
    case DatagramClass::malformed: return "malformed";
  }
  return "unknown";
}

Pipeline::Pipeline(tree::TreeConfig cfg, MetricsRecorder& metrics, int slot_id)
    : tree_(std::move(cfg)), metrics_(metrics), slot_id_(slot_id) {}

std::optional<wire::Bytes> Pipeline::handle_datagram(std::span<const std::byte> bytes, const ReplySink& sink,
                                                     double read_time) {
  const auto compute_start = Clock::now();
  const auto& hp = tree_.config().hp;
  wire::Message msg = wire::decode_datagram(bytes, hp.d_in, hp.d_out);

  if (const auto* cmd = std::get_if<wire::Command>(&msg)) {
    last_class_ = DatagramClass::command;
    tree_.reset();
    metrics_.record_command(cmd->value, tree_.stats().leaves);
    spdlog::info("event=datagram class=command slot={} bytes={} value={}", slot_id_, bytes.size(), cmd->value);
    return std::nullopt;
  }

  if (const auto* bad = std::get_if<wire::Malformed>(&msg)) {
    last_class_ = DatagramClass::malformed;
    metrics_.record_malformed(read_time);
    spdlog::warn("event=datagram class=malformed slot={} bytes={} kind={} reason=\"{}\"", slot_id_, bad->byte_len,
                 wire::to_string(bad->kind), bad->reason);
    return std::nullopt;
  }

  last_class_ = DatagramClass::sample;
  const auto& sample = std::get<wire::Sample>(msg);
  const tree::InsertOutcome outcome = tree_.insert(sample.x, sample.y);
  const std::vector<double> mu = tree_.predict(sample.x);
  wire::Bytes reply = wire::encode_reply(mu, sample.t);
  const double compute_time = seconds_since(compute_start);

  const auto send_start = Clock::now();
  const bool sent = sink ? sink(reply) : true;
  const double send_time = seconds_since(send_start);

  const tree::TreeStats st = tree_.stats();
  metrics_.record_sample({read_time, compute_time, send_time}, outcome.stored, sent, st.stored_points, st.leaves,
                         st.depth);
  if (!sent) {
    spdlog::warn("event=send_failed slot={} bytes={}", slot_id_, reply.size());
  }
  spdlog::debug(
      "event=datagram class=sample slot={} bytes={} stored={} split={} reply_bytes={} read_s={:.3e} "
      "compute_s={:.3e} send_s={:.3e}",
      slot_id_, bytes.size(), outcome.stored, outcome.split_occurred, reply.size(), read_time, compute_time,
      send_time);
  return reply;
}

}  // namespace gpnode::service
