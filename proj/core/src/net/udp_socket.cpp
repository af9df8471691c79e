#include "gpnode/net/udp_socket.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <fmt/format.h>

#include "gpnode/error.hpp"

namespace gpnode::net {

sockaddr_in make_address(const std::string& ip, int port) {
  if (port < 0 || port > 65535) {
    throw Error(ErrorCode::invalid_config, fmt::format("port {} out of range", port));
  }
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, ip.c_str(), &addr.sin_addr) != 1) {
    throw Error(ErrorCode::invalid_config, fmt::format("'{}' is not an IPv4 address", ip));
  }
  return addr;
}

UdpSocket::UdpSocket() {
  fd_ = ::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw Error(ErrorCode::io, fmt::format("socket(): {}", std::strerror(errno)));
  const int flags = ::fcntl(fd_, F_GETFL, 0);
  ::fcntl(fd_, F_SETFL, flags | O_NONBLOCK);
  // Bursts at high send rates overflow the default receive queue.
  const int rcvbuf = 4 << 20;
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof rcvbuf);
}

UdpSocket::~UdpSocket() { close(); }

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void UdpSocket::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void UdpSocket::bind(const std::string& ip, int port) {
  const sockaddr_in addr = make_address(ip, port);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    const int err = errno;
    if (err == EADDRINUSE) {
      throw Error(ErrorCode::port_occupied, fmt::format("UDP port {} on {} is already in use", port, ip));
    }
    throw Error(ErrorCode::io, fmt::format("cannot bind UDP {}:{}: {}", ip, port, std::strerror(err)));
  }
}

int UdpSocket::local_port() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw Error(ErrorCode::io, fmt::format("getsockname(): {}", std::strerror(errno)));
  }
  return ntohs(addr.sin_port);
}

bool UdpSocket::wait_readable(std::chrono::milliseconds timeout) const {
  pollfd pfd{fd_, POLLIN, 0};
  const int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  return rc > 0 && (pfd.revents & POLLIN) != 0;
}

std::optional<std::size_t> UdpSocket::try_recv(std::span<std::byte> buf, sockaddr_in* from) const {
  sockaddr_in src{};
  socklen_t len = sizeof src;
  const ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), MSG_TRUNC, reinterpret_cast<sockaddr*>(&src), &len);
  if (n < 0) return std::nullopt;
  if (from != nullptr) *from = src;
  return static_cast<std::size_t>(n);
}

bool UdpSocket::send_to(std::span<const std::byte> payload, const sockaddr_in& to) const {
  const ssize_t n =
      ::sendto(fd_, payload.data(), payload.size(), 0, reinterpret_cast<const sockaddr*>(&to), sizeof to);
  return n == static_cast<ssize_t>(payload.size());
}

int find_free_udp_port() {
  UdpSocket probe;
  probe.bind("127.0.0.1", 0);
  return probe.local_port();
}

}  // namespace gpnode::net
