#include "gpnode/client/stream.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "gpnode/error.hpp"
#include "gpnode/net/udp_socket.hpp"
#include "gpnode/wire/protocol.hpp"

namespace gpnode::client {

namespace {

using Clock = std::chrono::steady_clock;

double monotonic_seconds() {
  return std::chrono::duration<double>(Clock::now().time_since_epoch()).count();
}

double rmse(const std::vector<SampleRecord>& recs) {
  double acc = 0.0;
  std::size_t terms = 0;
  for (const auto& r : recs) {
    for (std::size_t j = 0; j < r.mu.size(); ++j) {
      const double e = r.mu[j] - r.y_true[j];
      acc += e * e;
      ++terms;
    }
  }
  return terms == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(terms));
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

}  // namespace

void StreamSpec::validate() const {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw Error(ErrorCode::invalid_config, fmt::format("rate must be positive, got {}", rate_hz));
  }
  if (count < 1) throw Error(ErrorCode::invalid_config, "count must be at least 1");
  if (!(reply_timeout.count() > 0.0)) throw Error(ErrorCode::invalid_config, "reply timeout must be positive");
  parse_host_port(target);
  parse_host_port(listen);
}

std::pair<std::string, int> parse_host_port(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::invalid_config, fmt::format("'{}' is not IP:PORT", text));
  }
  std::string host = text.substr(0, colon);
  int port = -1;
  try {
    std::size_t used = 0;
    port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) port = -1;
  } catch (const std::exception&) {
    port = -1;
  }
  if (port < 0 || port > 65535) throw Error(ErrorCode::invalid_config, fmt::format("bad port in '{}'", text));
  net::make_address(host, port);
  return {std::move(host), port};
}

Dataset resolve_source(const StreamSpec& spec) {
  Dataset ds = spec.source == "toy-sine" ? toy_sine(spec.count, spec.d_in, spec.noise_std, spec.seed)
                                         : load_csv(spec.source);
  if (ds.rows.size() < spec.count) {
    throw Error(ErrorCode::invalid_config,
                fmt::format("{} has {} rows, {} requested", spec.source, ds.rows.size(), spec.count));
  }
  ds.rows.resize(spec.count);
  if (ds.timestamps) ds.timestamps->resize(spec.count);
  return ds;
}

Summary ReplyLog::summary(std::optional<std::size_t> tail_k) const {
  Summary s;
  s.sent = records.size();
  std::vector<SampleRecord> matched;
  std::vector<double> rtts;
  for (const auto& r : records) {
    if (r.matched) {
      matched.push_back(r);
      rtts.push_back(r.rtt);
    }
  }
  s.received = matched.size();
  s.lost = s.sent - s.received;
  s.tail_k = tail_k.value_or(std::max<std::size_t>(1, records.size() / 5));
  s.rmse_overall = rmse(matched);
  const std::size_t k = std::min(s.tail_k, matched.size());
  s.rmse_tail = rmse(std::vector<SampleRecord>(matched.end() - static_cast<std::ptrdiff_t>(k), matched.end()));
  s.rtt_p50 = percentile(rtts, 0.50);
  s.rtt_p90 = percentile(rtts, 0.90);
  s.rtt_p99 = percentile(rtts, 0.99);
  s.rtt_max = rtts.empty() ? 0.0 : *std::max_element(rtts.begin(), rtts.end());
  s.wall_time = wall_time;
  return s;
}

ReplyLog stream(const StreamSpec& spec) { return stream(spec, resolve_source(spec)); }

ReplyLog stream(const StreamSpec& spec, const Dataset& data) {
  spec.validate();
  if (data.timestamps) check_timestamps(*data.timestamps);

  ReplyLog log;
  log.d_in = data.d_in;
  log.d_out = data.d_out;
  const std::size_t n = std::min(spec.count, data.rows.size());
  log.records.resize(n);

  const auto [target_ip, target_port] = parse_host_port(spec.target);
  const auto [listen_ip, listen_port] = parse_host_port(spec.listen);
  const sockaddr_in target = net::make_address(target_ip, target_port);

  net::UdpSocket sender;
  net::UdpSocket listener;
  listener.bind(listen_ip, listen_port);

  std::mutex mu;  // guards `pending`, `log.records`, `sent_at`
  std::unordered_map<std::uint64_t, std::size_t> pending;
  std::vector<Clock::time_point> sent_at(n);
  std::atomic<bool> sending_done{false};
  std::atomic<std::size_t> outstanding{0};
  Clock::time_point last_send{};
  const auto timeout = std::chrono::duration_cast<Clock::duration>(spec.reply_timeout);

  std::thread receiver([&] {
    std::vector<std::byte> buf(wire::kMaxDatagramBytes + 1);
    for (;;) {
      {
        std::lock_guard lock(mu);
        if (sending_done.load() && (pending.empty() || Clock::now() > last_send + timeout)) break;
      }
      if (!listener.wait_readable(std::chrono::milliseconds(5))) continue;
      while (auto len = listener.try_recv(buf)) {
        const auto arrived = Clock::now();
        wire::Reply reply;
        try {
          reply = wire::decode_reply(std::span(buf).first(std::min(*len, buf.size())), data.d_out);
        } catch (const Error&) {
          std::lock_guard lock(mu);
          ++log.stray_replies;
          continue;
        }
        std::lock_guard lock(mu);
        const auto it = pending.find(wire::bits_of(reply.t));
        if (it == pending.end() || arrived - sent_at[it->second] > timeout) {
          ++log.stray_replies;
          if (it != pending.end()) pending.erase(it);
          continue;
        }
        auto& rec = log.records[it->second];
        rec.mu = std::move(reply.mu);
        rec.rtt = std::chrono::duration<double>(arrived - sent_at[it->second]).count();
        rec.matched = true;
        pending.erase(it);
      }
    }
  });

  const auto start = Clock::now();
  const auto period = std::chrono::duration<double>(1.0 / spec.rate_hz);
  double prev_t = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    std::this_thread::sleep_until(start + std::chrono::duration_cast<Clock::duration>(period * static_cast<double>(i)));
    double t = data.timestamps ? (*data.timestamps)[i] : monotonic_seconds();
    if (!data.timestamps && !(t > prev_t)) t = std::nextafter(prev_t, INFINITY);
    prev_t = t;

    const auto& row = data.rows[i];
    const wire::Bytes payload = wire::encode_sample(row.x, row.y, t);
    {
      std::lock_guard lock(mu);
      auto& rec = log.records[i];
      rec.t = t;
      rec.x = row.x;
      rec.y_true = row.y;
      pending.emplace(wire::bits_of(t), i);
      sent_at[i] = Clock::now();
      last_send = sent_at[i];
    }
    if (!sender.send_to(payload, target)) {
      log.error = fmt::format("send of sample {} to {} failed: {}", i, spec.target, std::strerror(errno));
      std::lock_guard lock(mu);
      log.records.resize(i + 1);
      break;
    }
  }
  {
    std::lock_guard lock(mu);
    sending_done = true;
  }
  receiver.join();
  log.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  if (log.error) spdlog::error("event=stream_aborted reason=\"{}\"", *log.error);
  return log;
}

void send_command(const std::string& target, double value) {
  const auto [ip, port] = parse_host_port(target);
  net::UdpSocket sock;
  const wire::Bytes payload = wire::encode_command(value);
  if (!sock.send_to(payload, net::make_address(ip, port))) {
    throw Error(ErrorCode::io, fmt::format("cannot send command to {}: {}", target, std::strerror(errno)));
  }
}

std::vector<ReplyLog> monte_carlo(const StreamSpec& spec, std::size_t runs,
                                  const std::function<void(std::size_t)>& after_reset) {
  spec.validate();
  const Dataset data = resolve_source(spec);
  std::vector<ReplyLog> logs;
  for (std::size_t run = 0; run < runs; ++run) {
    send_command(spec.target, wire::kResetCommand);
    std::this_thread::sleep_for(spec.reply_timeout);
    if (after_reset) after_reset(run);
    logs.push_back(stream(spec, data));
    if (logs.back().error) break;
  }
  return logs;
}

}  // namespace gpnode::client
