#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gpnode/error.hpp"
#include "gpnode/gp/kernel.hpp"
#include "oracle.hpp"

using gpnode::Error;
using gpnode::ErrorCode;
using gpnode::gp::Hyperparameters;
using gpnode::gp::kernel_eval;
using gpnode::gp::make_isotropic;

TEST(Kernel, ZeroDistanceGivesSignalVariance) {
  auto hp = make_isotropic(3, 1, 2.0, 0.7, 0.1);
  const std::vector<double> x{0.3, -1.2, 5.0};
  EXPECT_DOUBLE_EQ(kernel_eval(x, x, hp), 4.0);
}

TEST(Kernel, HandEvaluatedValues) {
  auto hp = make_isotropic(1, 1, 1.0, 1.0, 0.1);
  EXPECT_NEAR(kernel_eval(std::vector{0.0}, std::vector{1.0}, hp), 0.6065306597126334, 1e-15);

  Hyperparameters hp2;
  hp2.d_in = 2;
  hp2.sigma_f = 1.0;
  hp2.length_scales = {1.0, 2.0};
  EXPECT_NEAR(kernel_eval(std::vector{0.0, 0.0}, std::vector{1.0, 2.0}, hp2), 0.36787944117144233, 1e-15);
}

TEST(Kernel, DimensionMismatchThrows) {
  auto hp = make_isotropic(2, 1, 1.0, 1.0, 0.1);
  try {
    kernel_eval(std::vector{0.0}, std::vector{1.0, 2.0}, hp);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

TEST(Kernel, SymmetricRangeAndMatchesDirectFormula) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> scale(0.05, 4.0);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    Hyperparameters hp;
    hp.d_in = dim(rng);
    hp.sigma_f = scale(rng);
    hp.length_scales.resize(hp.d_in);
    for (auto& l : hp.length_scales) l = scale(rng);
    std::vector<double> a(hp.d_in), b(hp.d_in);
    for (auto& v : a) v = coord(rng);
    for (auto& v : b) v = coord(rng);

    const double kab = kernel_eval(a, b, hp);
    EXPECT_EQ(kab, kernel_eval(b, a, hp));
    EXPECT_GT(kab, 0.0 - 1e-300);
    EXPECT_LE(kab, hp.sigma_f * hp.sigma_f);
    const double ref = gpnode::test::direct_kernel(a, b, hp);
    if (ref > 1e-300) {
      EXPECT_LE(std::abs(kab - ref) / ref, 1e-14);
    }
  }
}

TEST(Kernel, StrictlyIncreasingInEachLengthScale) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Hyperparameters hp;
  hp.d_in = 3;
  hp.length_scales = {0.5, 0.8, 1.3};
  std::vector<double> a(3), b(3);
  for (int trial = 0; trial < 200; ++trial) {
    for (auto& v : a) v = coord(rng);
    for (auto& v : b) v = coord(rng);
    for (std::size_t d = 0; d < 3; ++d) {
      if (a[d] == b[d]) continue;
      Hyperparameters wider = hp;
      wider.length_scales[d] *= 1.05;
      EXPECT_LT(kernel_eval(a, b, hp), kernel_eval(a, b, wider));
    }
  }
}

TEST(Hyperparameters, ValidationRejectsBadValues) {
  auto hp = make_isotropic(2, 1, 1.0, 1.0, 0.1);
  EXPECT_NO_THROW(hp.validate());

  auto bad = hp;
  bad.sigma_f = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = hp;
  bad.sigma_n = -1.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = hp;
  bad.length_scales = {1.0};
  EXPECT_THROW(bad.validate(), Error);
  bad = hp;
  bad.length_scales[1] = NAN;
  EXPECT_THROW(bad.validate(), Error);
  bad = hp;
  bad.d_out = 0;
  EXPECT_THROW(bad.validate(), Error);
}
