#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gpnode::wire {

// Datagrams are packed IEEE-754 binary64 values, little-endian, no header.
// See docs/wire-format.md for layouts and worked hex dumps.

inline constexpr std::size_t kValueBytes = 8;
inline constexpr std::size_t kMaxDatagramBytes = 65507;
inline constexpr double kResetCommand = -1.0;

using Bytes = std::vector<std::byte>;

/// One-value datagram; every scalar re-initialises the model (canonically -1).
struct Command {
  double value = kResetCommand;
};

/// `[x (d_in), y (d_out), t]`. `t` is opaque and may be any bit pattern.
struct Sample {
  std::vector<double> x;
  std::vector<double> y;
  double t = 0.0;
};

enum class MalformedKind {
  misaligned,      // byte length not a multiple of 8
  empty,           // zero values
  pair,            // two values: neither command nor sample
  count_mismatch,  // value count differs from d_in + d_out + 1
  non_finite,      // NaN or Inf inside x or y
};

struct Malformed {
  MalformedKind kind;
  std::string reason;
  std::size_t byte_len = 0;
};

using Message = std::variant<Command, Sample, Malformed>;

struct Reply {
  std::vector<double> mu;
  double t = 0.0;
};

std::string_view to_string(MalformedKind kind) noexcept;

/// Classifies any byte string; never throws on content.
Message decode_datagram(std::span<const std::byte> bytes, std::size_t d_in, std::size_t d_out);

/// Throws Error(invalid_argument) for non-finite x or y; t is copied verbatim.
Bytes encode_sample(std::span<const double> x, std::span<const double> y, double t);
Bytes encode_command(double value = kResetCommand);

/// Throws Error(invalid_argument) for non-finite mu; t is copied verbatim.
Bytes encode_reply(std::span<const double> mu, double t);
/// Throws Error(malformed_reply) unless the length is exactly 8 * (d_out + 1).
Reply decode_reply(std::span<const std::byte> bytes, std::size_t d_out);

// Little-endian binary64 helpers, exposed for tests and tools.
void store_f64(double value, std::byte* out) noexcept;
double load_f64(const std::byte* in) noexcept;

inline std::uint64_t bits_of(double v) noexcept { return std::bit_cast<std::uint64_t>(v); }

}  // namespace gpnode::wire
