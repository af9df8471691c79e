#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <netinet/in.h>

namespace gpnode::net {

/// IPv4 UDP socket owning its descriptor.
class UdpSocket {
 public:
  UdpSocket();
  ~UdpSocket();
  UdpSocket(UdpSocket&& other) noexcept;
  UdpSocket& operator=(UdpSocket&& other) noexcept;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  /// Throws Error(port_occupied) when the address is in use, Error(io) otherwise.
  void bind(const std::string& ip, int port);
  int local_port() const;

  /// Waits up to `timeout` for readability. False on timeout.
  bool wait_readable(std::chrono::milliseconds timeout) const;

  /// Non-blocking receive; std::nullopt when nothing is queued.
  std::optional<std::size_t> try_recv(std::span<std::byte> buf, sockaddr_in* from = nullptr) const;

  /// Returns false (and leaves errno) on failure.
  bool send_to(std::span<const std::byte> payload, const sockaddr_in& to) const;

  int fd() const noexcept { return fd_; }
  void close() noexcept;

 private:
  int fd_ = -1;
};

/// Throws Error(invalid_config) if `ip` is not dotted-quad IPv4 or port out of range.
sockaddr_in make_address(const std::string& ip, int port);

/// Asks the kernel for a currently free loopback UDP port.
int find_free_udp_port();

}  // namespace gpnode::net
