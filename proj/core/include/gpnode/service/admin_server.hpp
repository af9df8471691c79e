#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "gpnode/error.hpp"
#include "gpnode/service/node.hpp"

namespace gpnode::service {

/// Local HTTP/JSON admin API over a Node (routes in docs/admin-api.md).
/// Errors answer with {"error": {"code": "<locked-state|...>", "message": ...}}.
class AdminServer {
 public:
  explicit AdminServer(Node& node);
  ~AdminServer();
  AdminServer(const AdminServer&) = delete;
  AdminServer& operator=(const AdminServer&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws Error(port_occupied) when it cannot bind.
  int start(const std::string& ip, int port);
  void stop();
  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// JSON view of one slot as served by GET /api/slots.
nlohmann::json slot_json(const ModelSlot& slot);

/// Maps an error code onto the HTTP status the admin API answers with.
int http_status(ErrorCode code) noexcept;

}  // namespace gpnode::service
