#include "gpnode/wire/protocol.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include <fmt/format.h>

#include "gpnode/error.hpp"

namespace gpnode::wire {

namespace {

std::uint64_t swap_if_big_endian(std::uint64_t v) noexcept {
  if constexpr (std::endian::native == std::endian::big) {
    return __builtin_bswap64(v);
  } else {
    return v;
  }
}

bool all_finite(std::span<const double> v) noexcept {
  for (double e : v) {
    if (!std::isfinite(e)) return false;
  }
  return true;
}

Malformed malformed(MalformedKind kind, std::string reason, std::size_t len) {
  return Malformed{kind, std::move(reason), len};
}

}  // namespace

std::string_view to_string(MalformedKind kind) noexcept {
  switch (kind) {
    case MalformedKind::misaligned: return "misaligned";
    case MalformedKind::empty: return "empty";
    case MalformedKind::pair: return "pair";
    case MalformedKind::count_mismatch: return "count-mismatch";
    case MalformedKind::non_finite: return "non-finite";
  }
  return "unknown";
}

void store_f64(double value, std::byte* out) noexcept {
  const std::uint64_t raw = swap_if_big_endian(std::bit_cast<std::uint64_t>(value));
  std::memcpy(out, &raw, sizeof raw);
}

double load_f64(const std::byte* in) noexcept {
  std::uint64_t raw;
  std::memcpy(&raw, in, sizeof raw);
  return std::bit_cast<double>(swap_if_big_endian(raw));
}

Message decode_datagram(std::span<const std::byte> bytes, std::size_t d_in, std::size_t d_out) {
  const std::size_t len = bytes.size();
  if (len % kValueBytes != 0) {
    return malformed(MalformedKind::misaligned, fmt::format("{} bytes is not a multiple of 8", len), len);
  }
  const std::size_t count = len / kValueBytes;
  if (count == 0) return malformed(MalformedKind::empty, "empty datagram", len);
  if (count == 1) return Command{load_f64(bytes.data())};
  if (count == 2) return malformed(MalformedKind::pair, "two values are neither a command nor a sample", len);

  const std::size_t expected = d_in + d_out + 1;
  if (count != expected) {
    return malformed(MalformedKind::count_mismatch,
                     fmt::format("{} values, expected {} (d_in={} d_out={} + timestamp)", count, expected, d_in,
                                 d_out),
                     len);
  }

  Sample s;
  s.x.resize(d_in);
  s.y.resize(d_out);
  const std::byte* p = bytes.data();
  for (auto& v : s.x) {
    v = load_f64(p);
    p += kValueBytes;
  }
  for (auto& v : s.y) {
    v = load_f64(p);
    p += kValueBytes;
  }
  s.t = load_f64(p);
  if (!all_finite(s.x) || !all_finite(s.y)) {
    return malformed(MalformedKind::non_finite, "non-finite value in x or y", len);
  }
  return s;
}

Bytes encode_sample(std::span<const double> x, std::span<const double> y, double t) {
  if (!all_finite(x) || !all_finite(y)) {
    throw Error(ErrorCode::invalid_argument, "encode_sample: x and y must be finite");
  }
  Bytes out((x.size() + y.size() + 1) * kValueBytes);
  std::byte* p = out.data();
  for (double v : x) {
    store_f64(v, p);
    p += kValueBytes;
  }
  for (double v : y) {
    store_f64(v, p);
    p += kValueBytes;
  }
  store_f64(t, p);
  return out;
}

Bytes encode_command(double value) {
  Bytes out(kValueBytes);
  store_f64(value, out.data());
  return out;
}

Bytes encode_reply(std::span<const double> mu, double t) {
  if (!all_finite(mu)) throw Error(ErrorCode::invalid_argument, "encode_reply: mu must be finite");
  Bytes out((mu.size() + 1) * kValueBytes);
  std::byte* p = out.data();
  for (double v : mu) {
    store_f64(v, p);
    p += kValueBytes;
  }
  store_f64(t, p);
  return out;
}

Reply decode_reply(std::span<const std::byte> bytes, std::size_t d_out) {
  const std::size_t expected = (d_out + 1) * kValueBytes;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::malformed_reply,
                fmt::format("reply has {} bytes, expected {} for d_out={}", bytes.size(), expected, d_out));
  }
  Reply r;
  r.mu.resize(d_out);
  const std::byte* p = bytes.data();
  for (auto& v : r.mu) {
    v = load_f64(p);
    p += kValueBytes;
  }
  r.t = load_f64(p);
  return r;
}

}  // namespace gpnode::wire
