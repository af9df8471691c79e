#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpnode {

// Machine-readable failure classes. The admin API exposes `to_string(code)`
// verbatim in error bodies.
enum class ErrorCode {
  invalid_argument,
  invalid_config,
  numerical,
  locked_state,
  port_occupied,
  not_found,
  inactive,
  malformed_reply,
  io,
  logic,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::locked_state: return "locked-state";
    case ErrorCode::port_occupied: return "port-occupied";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::inactive: return "inactive";
    case ErrorCode::malformed_reply: return "malformed-reply";
    case ErrorCode::io: return "io";
    case ErrorCode::logic: return "logic";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gpnode
