#pragma once

#include <cstddef>
#include <vector>

namespace gpnode::gp {

/// ARD-SE kernel hyperparameters plus the problem dimensions.
///
/// `sigma_f` and `sigma_n` are standard deviations; the kernel and the noise
/// term use their squares.
struct Hyperparameters {
  double sigma_f = 1.0;
  std::vector<double> length_scales{1.0};
  double sigma_n = 0.1;
  std::size_t d_in = 1;
  std::size_t d_out = 1;

  /// Throws Error(invalid_config) when any invariant is violated.
  void validate() const;

  double signal_variance() const noexcept { return sigma_f * sigma_f; }
  double noise_variance() const noexcept { return sigma_n * sigma_n; }

  bool operator==(const Hyperparameters&) const = default;
};

/// Isotropic helper: every input dimension gets the same length scale.
Hyperparameters make_isotropic(std::size_t d_in, std::size_t d_out, double sigma_f,
                               double length_scale, double sigma_n);

}  // namespace gpnode::gp
