#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gpnode::client {

struct DataRow {
  std::vector<double> x;
  std::vector<double> y;
};

struct Dataset {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::vector<DataRow> rows;
  // Caller-supplied timestamps (CSV column `t`); generated at send time if absent.
  std::optional<std::vector<double>> timestamps;
};

/// CSV with header `x1..xD,y1..yK[,t]`, one sample per row.
/// Throws Error(invalid_config) on a bad header or row.
Dataset parse_csv(const std::string& text);
Dataset load_csv(const std::filesystem::path& file);

/// y = sin(2*pi*x_1) + eps, x ~ U[0,1]^d_in, eps ~ N(0, noise_std^2).
/// Bit-reproducible for a given seed: mt19937_64 with 53-bit uniforms and
/// Box-Muller normals.
Dataset toy_sine(std::size_t count, std::size_t d_in, double noise_std, std::uint64_t seed);

/// Noise-free value of the toy function.
double toy_sine_truth(const std::vector<double>& x);

/// Throws Error(invalid_argument) unless timestamps are strictly increasing.
void check_timestamps(const std::vector<double>& t);

}  // namespace gpnode::client
