#include "gpnode/service/endpoint.hpp"

#include <arpa/inet.h>
#include <cmath>
#include <ifaddrs.h>
#include <net/if.h>

#include <fmt/format.h>

#include "gpnode/error.hpp"
#include "gpnode/net/udp_socket.hpp"

namespace gpnode::service {

void EndpointConfig::validate() const {
  if (read_port < 1 || read_port > 65535) {
    throw Error(ErrorCode::invalid_config, fmt::format("read_port {} outside 1-65535", read_port));
  }
  if (send_port < 1 || send_port > 65535) {
    throw Error(ErrorCode::invalid_config, fmt::format("send_port {} outside 1-65535", send_port));
  }
  if (!(std::isfinite(listen_rate_hz) && listen_rate_hz > 0.0)) {
    throw Error(ErrorCode::invalid_config, fmt::format("listen_rate_hz must be positive, got {}", listen_rate_hz));
  }
  net::make_address(read_ip, read_port);
  net::make_address(send_ip, send_port);
}

EndpointConfig default_endpoint(int slot_id) {
  EndpointConfig e;
  e.read_port = kDefaultReadPort + slot_id;
  e.send_port = kDefaultSendPort + slot_id;
  return e;
}

std::string local_ipv4() {
  ifaddrs* list = nullptr;
  if (::getifaddrs(&list) != 0) return "127.0.0.1";
  std::string found = "127.0.0.1";
  for (ifaddrs* it = list; it != nullptr; it = it->ifa_next) {
    if (it->ifa_addr == nullptr || it->ifa_addr->sa_family != AF_INET) continue;
    if ((it->ifa_flags & IFF_LOOPBACK) != 0 || (it->ifa_flags & IFF_UP) == 0) continue;
    char buf[INET_ADDRSTRLEN];
    const auto* sin = reinterpret_cast<const sockaddr_in*>(it->ifa_addr);
    if (::inet_ntop(AF_INET, &sin->sin_addr, buf, sizeof buf) != nullptr) {
      found = buf;
      break;
    }
  }
  ::freeifaddrs(list);
  return found;
}

}  // namespace gpnode::service
