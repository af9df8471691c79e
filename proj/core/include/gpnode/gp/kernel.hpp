#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "gpnode/gp/hyperparameters.hpp"

namespace gpnode::gp {

/// k(x, x') = sigma_f^2 * exp(-1/2 * sum_d (x_d - x'_d)^2 / l_d^2)
///
/// Throws Error(invalid_argument) if either vector does not have length d_in.
double kernel_eval(std::span<const double> x, std::span<const double> x2, const Hyperparameters& hp);

// Inner-loop form without length checks. The sum and the exponential are taken
// in long double: exp(-s/2) scales the rounding error of s by s/2, which would
// otherwise dominate for distant points.
inline double kernel_eval_unchecked(const double* x, const double* x2, const double* length_scales,
                                    std::size_t dim, double signal_variance) noexcept {
  long double acc = 0.0L;
  for (std::size_t d = 0; d < dim; ++d) {
    const long double z = (static_cast<long double>(x[d]) - x2[d]) / length_scales[d];
    acc += z * z;
  }
  return static_cast<double>(signal_variance * std::exp(-0.5L * acc));
}

}  // namespace gpnode::gp
