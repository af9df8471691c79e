#pragma once

#include <random>

namespace gpnode {

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
/// Both the engine and this mapping are fully specified, so a replay in
/// another implementation reproduces the same sequence.
inline double uniform_unit(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gpnode
