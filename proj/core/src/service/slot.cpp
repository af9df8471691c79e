#include "gpnode/service/slot.hpp"

#include <array>
#include <chrono>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "gpnode/error.hpp"

namespace gpnode::service {

namespace {

using Clock = std::chrono::steady_clock;

constexpr auto kWakeInterval = std::chrono::milliseconds(50);
constexpr std::size_t kRecvBufferBytes = 65536;

}  // namespace

ModelSlot::ModelSlot(int id, tree::TreeConfig cfg, EndpointConfig endpoint)
    : id_(id), cfg_(std::move(cfg)), endpoint_(std::move(endpoint)) {
  cfg_.validate();
  endpoint_.validate();
}

ModelSlot::~ModelSlot() {
  std::lock_guard lock(ctl_mu_);
  stop_locked();
}

SlotState ModelSlot::state() const {
  std::lock_guard lock(ctl_mu_);
  return SlotState{id_,         cfg_,      endpoint_, preset_, udp_active_, pipeline_ != nullptr,
                   running_.load(), last_error_};
}

void ModelSlot::fail(const std::string& message) {
  last_error_ = message;
  spdlog::error("event=slot_error slot={} message=\"{}\"", id_, message);
}

void ModelSlot::set_endpoint(const EndpointConfig& endpoint) {
  std::lock_guard lock(ctl_mu_);
  if (udp_active_) {
    throw Error(ErrorCode::locked_state, fmt::format("slot {}: turn UDP off before editing the endpoint", id_));
  }
  endpoint.validate();
  endpoint_ = endpoint;
}

void ModelSlot::set_tree_config(const tree::TreeConfig& cfg) {
  std::lock_guard lock(ctl_mu_);
  if (pipeline_) {
    throw Error(ErrorCode::locked_state,
                fmt::format("slot {}: GP model is active; deactivate it to edit dimensions or hyperparameters", id_));
  }
  cfg.validate();
  cfg_ = cfg;
  preset_.clear();
}

void ModelSlot::apply_preset(const Preset& preset) {
  std::lock_guard lock(ctl_mu_);
  if (pipeline_) {
    throw Error(ErrorCode::locked_state,
                fmt::format("slot {}: GP model is active; deactivate it before loading preset '{}'", id_, preset.name));
  }
  tree::TreeConfig next = cfg_;
  preset.apply_to(next);
  next.validate();
  cfg_ = std::move(next);
  preset_ = preset.name;
}

void ModelSlot::activate_udp() {
  std::lock_guard lock(ctl_mu_);
  stop_locked();
  read_socket_.reset();
  send_socket_.reset();
  udp_active_ = false;
  try {
    net::UdpSocket reader;
    reader.bind(endpoint_.read_ip, endpoint_.read_port);
    net::UdpSocket sender;
    send_addr_ = net::make_address(endpoint_.send_ip, endpoint_.send_port);
    read_socket_.emplace(std::move(reader));
    send_socket_.emplace(std::move(sender));
  } catch (const Error& e) {
    fail(e.what());
    throw;
  }
  udp_active_ = true;
  last_error_.clear();
  spdlog::info("event=udp_on slot={} read={}:{} send={}:{}", id_, endpoint_.read_ip, endpoint_.read_port,
               endpoint_.send_ip, endpoint_.send_port);
}

void ModelSlot::deactivate_udp() {
  std::lock_guard lock(ctl_mu_);
  stop_locked();
  read_socket_.reset();
  send_socket_.reset();
  udp_active_ = false;
  spdlog::info("event=udp_off slot={}", id_);
}

void ModelSlot::activate_gp() {
  std::lock_guard lock(ctl_mu_);
  const bool was_running = running_.load();
  stop_locked();
  {
    std::lock_guard pipe(pipe_mu_);
    pipeline_.reset();
    pipeline_ = std::make_unique<Pipeline>(cfg_, metrics_, id_);
  }
  metrics_.record_new_tree();
  spdlog::info("event=gp_on slot={} d_in={} d_out={} max_leaves={} max_local_data={}", id_, cfg_.hp.d_in,
               cfg_.hp.d_out, cfg_.max_leaves, cfg_.max_local_data);
  if (was_running) spdlog::info("event=stopped slot={} reason=gp_reactivated", id_);
}

void ModelSlot::deactivate_gp() {
  std::lock_guard lock(ctl_mu_);
  stop_locked();
  std::lock_guard pipe(pipe_mu_);
  pipeline_.reset();
  spdlog::info("event=gp_off slot={}", id_);
}

void ModelSlot::start() {
  std::lock_guard lock(ctl_mu_);
  if (running_.load()) return;
  if (!udp_active_) throw Error(ErrorCode::inactive, fmt::format("slot {}: UDP is not active", id_));
  if (!pipeline_) throw Error(ErrorCode::inactive, fmt::format("slot {}: GP model is not active", id_));
  stop_requested_ = false;
  running_ = true;
  worker_ = std::thread([this] { run_loop(); });
  spdlog::info("event=started slot={} rate_hz={}", id_, endpoint_.listen_rate_hz);
}

void ModelSlot::stop() {
  std::lock_guard lock(ctl_mu_);
  stop_locked();
}

void ModelSlot::stop_locked() {
  if (!worker_.joinable()) {
    running_ = false;
    return;
  }
  stop_requested_ = true;
  worker_.join();
  running_ = false;
  spdlog::info("event=stopped slot={}", id_);
}

bool ModelSlot::send_reply(std::span<const std::byte> reply) {
  return send_socket_ && send_socket_->send_to(reply, send_addr_);
}

std::optional<wire::Bytes> ModelSlot::handle_datagram(std::span<const std::byte> bytes) {
  std::lock_guard lock(ctl_mu_);
  if (!pipeline_) throw Error(ErrorCode::inactive, fmt::format("slot {}: GP model is not active", id_));
  std::lock_guard pipe(pipe_mu_);
  Pipeline::ReplySink sink;
  if (send_socket_) sink = [this](std::span<const std::byte> r) { return send_reply(r); };
  return pipeline_->handle_datagram(bytes, sink);
}

std::optional<tree::TreeStats> ModelSlot::tree_stats() const {
  std::lock_guard lock(ctl_mu_);
  if (!pipeline_) return std::nullopt;
  std::lock_guard pipe(pipe_mu_);
  return pipeline_->tree().stats();
}

std::optional<int> ModelSlot::bound_read_port() const {
  std::lock_guard lock(ctl_mu_);
  if (!read_socket_) return std::nullopt;
  return read_socket_->local_port();
}

void ModelSlot::run_loop() {
  const auto period = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(1.0 / endpoint_.listen_rate_hz));
  std::vector<std::byte> buf(kRecvBufferBytes);
  const Pipeline::ReplySink sink = [this](std::span<const std::byte> r) { return send_reply(r); };

  auto drain = [&] {
    for (;;) {
      const auto read_start = Clock::now();
      const auto n = read_socket_->try_recv(buf);
      if (!n) return;
      const double read_time = std::chrono::duration<double>(Clock::now() - read_start).count();
      std::lock_guard pipe(pipe_mu_);
      try {
        pipeline_->handle_datagram(std::span(buf).first(std::min(*n, buf.size())), sink, read_time);
      } catch (const std::exception& e) {
        spdlog::error("event=pipeline_error slot={} bytes={} what=\"{}\"", id_, *n, e.what());
      }
    }
  };

  auto next_poll = Clock::now();
  while (!stop_requested_.load()) {
    if (!read_socket_->wait_readable(kWakeInterval)) continue;
    drain();
    next_poll += period;
    const auto now = Clock::now();
    if (next_poll < now) {
      next_poll = now;
    } else {
      std::this_thread::sleep_until(next_poll);
    }
  }
  drain();
}

}  // namespace gpnode::service
