#include "gpnode/gp/hyperparameters.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gpnode/error.hpp"

namespace gpnode::gp {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void Hyperparameters::validate() const {
  if (d_in == 0) throw Error(ErrorCode::invalid_config, "d_in must be positive");
  if (d_out == 0) throw Error(ErrorCode::invalid_config, "d_out must be positive");
  if (!positive_finite(sigma_f)) {
    throw Error(ErrorCode::invalid_config, fmt::format("sigma_f must be positive and finite, got {}", sigma_f));
  }
  if (!positive_finite(sigma_n)) {
    throw Error(ErrorCode::invalid_config, fmt::format("sigma_n must be positive and finite, got {}", sigma_n));
  }
  if (length_scales.size() != d_in) {
    throw Error(ErrorCode::invalid_config,
                fmt::format("expected {} length scales (one per input dimension), got {}", d_in,
                            length_scales.size()));
  }
  for (std::size_t d = 0; d < length_scales.size(); ++d) {
    if (!positive_finite(length_scales[d])) {
      throw Error(ErrorCode::invalid_config,
                  fmt::format("length_scales[{}] must be positive and finite, got {}", d, length_scales[d]));
    }
  }
}

Hyperparameters make_isotropic(std::size_t d_in, std::size_t d_out, double sigma_f, double length_scale,
                               double sigma_n) {
  Hyperparameters hp;
  hp.d_in = d_in;
  hp.d_out = d_out;
  hp.sigma_f = sigma_f;
  hp.sigma_n = sigma_n;
  hp.length_scales.assign(d_in, length_scale);
  return hp;
}

}  // namespace gpnode::gp
