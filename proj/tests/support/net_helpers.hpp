#pragma once

#include <chrono>
#include <optional>
#include <thread>
#include <vector>

#include "gpnode/net/udp_socket.hpp"
#include "gpnode/wire/protocol.hpp"

namespace gpnode::test {

/// Loopback peer standing in for the "server" that feeds a slot.
class UdpPeer {
 public:
  UdpPeer() { listener_.bind("127.0.0.1", 0); }

  int port() const { return listener_.local_port(); }

  void send(const wire::Bytes& payload, int port) const {
    sender_.send_to(payload, net::make_address("127.0.0.1", port));
  }

  std::optional<wire::Bytes> receive(std::chrono::milliseconds timeout = std::chrono::milliseconds(1000)) const {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::vector<std::byte> buf(70000);
    while (std::chrono::steady_clock::now() < deadline) {
      if (auto n = listener_.try_recv(buf)) return wire::Bytes(buf.begin(), buf.begin() + static_cast<long>(*n));
      listener_.wait_readable(std::chrono::milliseconds(5));
    }
    return std::nullopt;
  }

 private:
  net::UdpSocket listener_;
  net::UdpSocket sender_;
};

template <typename Pred>
bool wait_for(Pred pred, std::chrono::milliseconds timeout = std::chrono::milliseconds(3000)) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    if (pred()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return pred();
}

}  // namespace gpnode::test
