#include "gpnode/gp/kernel.hpp"

#include <fmt/format.h>

#include "gpnode/error.hpp"

namespace gpnode::gp {

double kernel_eval(std::span<const double> x, std::span<const double> x2, const Hyperparameters& hp) {
  if (x.size() != hp.d_in || x2.size() != hp.d_in || hp.length_scales.size() != hp.d_in) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("kernel_eval: expected vectors of length {}, got {} and {}", hp.d_in, x.size(),
                            x2.size()));
  }
  return kernel_eval_unchecked(x.data(), x2.data(), hp.length_scales.data(), hp.d_in, hp.signal_variance());
}

}  // namespace gpnode::gp
