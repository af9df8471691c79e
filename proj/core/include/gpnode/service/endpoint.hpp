#pragma once

#include <cstdint>
#include <string>

namespace gpnode::service {

inline constexpr std::uint16_t kDefaultReadPort = 8000;
inline constexpr std::uint16_t kDefaultSendPort = 8050;
inline constexpr double kDefaultListenRateHz = 1000.0;

struct EndpointConfig {
  std::string read_ip = "127.0.0.1";
  int read_port = kDefaultReadPort;
  std::string send_ip = "127.0.0.1";
  int send_port = kDefaultSendPort;
  double listen_rate_hz = kDefaultListenRateHz;

  /// Throws Error(invalid_config) on a bad address, port, or rate.
  void validate() const;

  bool operator==(const EndpointConfig&) const = default;
};

/// Slot i defaults to read 8000+i / send 8050+i on loopback.
EndpointConfig default_endpoint(int slot_id);

/// First non-loopback IPv4 address of this host, or 127.0.0.1 if none.
std::string local_ipv4();

}  // namespace gpnode::service
