#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "gpnode/error.hpp"
#include "gpnode/gp/local_gp.hpp"
#include "oracle.hpp"

using gpnode::Error;
using gpnode::ErrorCode;
using gpnode::gp::Hyperparameters;
using gpnode::gp::LocalGP;
using gpnode::gp::make_isotropic;
using gpnode::test::DenseGP;
using gpnode::test::uniform_points;

namespace {

std::vector<std::vector<double>> sine_targets(const std::vector<std::vector<double>>& xs) {
  std::vector<std::vector<double>> ys;
  for (const auto& x : xs) ys.push_back({std::sin(2.0 * std::numbers::pi * x[0])});
  return ys;
}

void expect_residual_invariant(const LocalGP& m) {
  const Eigen::MatrixXd L = m.cholesky();
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    EXPECT_GT(L(i, i), 0.0);
    for (Eigen::Index j = i + 1; j < L.cols(); ++j) EXPECT_EQ(L(i, j), 0.0);
  }
  const Eigen::MatrixXd recon = L * L.transpose() * m.alphas();
  const Eigen::MatrixXd y = m.outputs();
  EXPECT_LE((recon - y).norm() / std::max(1.0, y.norm()), 1e-8);
}

}  // namespace

TEST(LocalGP, SinglePointClosedForm) {
  auto hp = make_isotropic(1, 1, 1.0, 1.0, 1.0);
  const std::vector<std::vector<double>> xs{{0.0}}, ys{{3.0}};
  const LocalGP m = LocalGP::fit(xs, ys, hp);
  EXPECT_NEAR(m.cholesky()(0, 0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(m.alphas()(0, 0), 1.5, 1e-15);
  EXPECT_NEAR(m.predict_mean(std::vector{0.0})[0], 1.5, 1e-15);
}

TEST(LocalGP, EmptyModelReturnsPrior) {
  auto hp = make_isotropic(2, 3, 1.7, 1.0, 0.1);
  const LocalGP m(hp);
  EXPECT_EQ(m.predict_mean(std::vector{0.4, 9.0}), std::vector<double>(3, 0.0));
  EXPECT_DOUBLE_EQ(m.predict_var(std::vector{0.4, 9.0}), 1.7 * 1.7);
}

TEST(LocalGP, DuplicateInputsFactorThanksToNoise) {
  auto hp = make_isotropic(1, 1, 1.0, 1.0, 0.1);
  const std::vector<std::vector<double>> xs{{0.0}, {0.0}}, ys{{1.0}, {2.0}};
  const LocalGP m = LocalGP::fit(xs, ys, hp);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.applied_jitter(), 0.0);
  expect_residual_invariant(m);
}

TEST(LocalGP, FitRejectsBadShapes) {
  auto hp = make_isotropic(2, 1, 1.0, 1.0, 0.1);
  const std::vector<std::vector<double>> none;
  EXPECT_THROW(LocalGP::fit(none, none, hp), Error);
  const std::vector<std::vector<double>> xs{{0.0, 1.0}}, ys2{{1.0}, {2.0}};
  EXPECT_THROW(LocalGP::fit(xs, ys2, hp), Error);
  const std::vector<std::vector<double>> short_x{{0.0}}, ys{{1.0}};
  EXPECT_THROW(LocalGP::fit(short_x, ys, hp), Error);
}

TEST(LocalGP, PredictionsMatchDenseOracleAtTrainingPoints) {
  std::mt19937_64 rng(3);
  auto hp = make_isotropic(3, 1, 1.3, 0.4, 0.2);
  const auto xs = uniform_points(20, 3, rng);
  const auto ys = sine_targets(xs);
  const LocalGP m = LocalGP::fit(xs, ys, hp);
  const DenseGP oracle(xs, ys, hp);
  for (const auto& x : xs) EXPECT_NEAR(m.predict_mean(x)[0], oracle.mean(x)[0], 1e-10);
  expect_residual_invariant(m);
}

TEST(LocalGP, HeldOutMeanMatchesDenseOracle) {
  auto hp = make_isotropic(1, 1, 1.0, 0.3, 0.1);
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < 30; ++i) xs.push_back({i / 29.0 * 3.0});
  std::vector<std::vector<double>> ys;
  for (const auto& x : xs) ys.push_back({std::sin(x[0])});
  const LocalGP m = LocalGP::fit(xs, ys, hp);
  const DenseGP oracle(xs, ys, hp);
  const std::vector<double> probe{1.234};
  EXPECT_NEAR(m.predict_mean(probe)[0], oracle.mean(probe)[0], 1e-10);
  EXPECT_NEAR(m.predict_var(probe), oracle.variance(probe), 1e-10);
}

TEST(LocalGP, AddPointMatchesFreshFit) {
  auto hp = make_isotropic(1, 1, 1.0, 1.0, 1.0);
  LocalGP inc = LocalGP::fit(std::vector<std::vector<double>>{{0.0}}, std::vector<std::vector<double>>{{3.0}}, hp);
  inc.add_point(std::vector{5.0}, std::vector{1.0});
  const LocalGP batch =
      LocalGP::fit(std::vector<std::vector<double>>{{0.0}, {5.0}}, std::vector<std::vector<double>>{{3.0}, {1.0}}, hp);
  for (double x : {-1.0, 0.0, 2.5, 5.0, 7.0}) {
    EXPECT_NEAR(inc.predict_mean(std::vector{x})[0], batch.predict_mean(std::vector{x})[0], 1e-12);
  }
}

TEST(LocalGP, AddToEmptyEqualsSinglePointFit) {
  auto hp = make_isotropic(2, 2, 1.4, 0.6, 0.3);
  LocalGP inc(hp);
  inc.add_point(std::vector{0.1, 0.2}, std::vector{1.0, -2.0});
  const LocalGP batch = LocalGP::fit(std::vector<std::vector<double>>{{0.1, 0.2}},
                                     std::vector<std::vector<double>>{{1.0, -2.0}}, hp);
  EXPECT_DOUBLE_EQ(inc.cholesky()(0, 0), batch.cholesky()(0, 0));
  const auto a = inc.predict_mean(std::vector{0.3, 0.0});
  const auto b = batch.predict_mean(std::vector{0.3, 0.0});
  EXPECT_NEAR(a[0], b[0], 1e-15);
  EXPECT_NEAR(a[1], b[1], 1e-15);
}

TEST(LocalGP, LongIncrementalChainAgreesWithBatch) {
  std::mt19937_64 rng(19);
  auto hp = make_isotropic(2, 2, 1.0, 0.35, 0.1);
  const auto xs = uniform_points(200, 2, rng);
  std::vector<std::vector<double>> ys;
  for (const auto& x : xs) ys.push_back({std::sin(5 * x[0]) + x[1], std::cos(3 * x[1])});
  LocalGP inc(hp);
  for (std::size_t i = 0; i < xs.size(); ++i) inc.add_point(xs[i], ys[i]);
  const LocalGP batch = LocalGP::fit(xs, ys, hp);
  const auto probes = uniform_points(50, 2, rng);
  for (const auto& p : probes) {
    const auto a = inc.predict_mean(p);
    const auto b = batch.predict_mean(p);
    EXPECT_NEAR(a[0], b[0], 1e-6);
    EXPECT_NEAR(a[1], b[1], 1e-6);
  }
  expect_residual_invariant(inc);
}

TEST(LocalGP, VarianceBoundsAndLimits) {
  std::mt19937_64 rng(5);
  auto hp = make_isotropic(2, 1, 1.5, 0.3, 0.05);
  const auto xs = uniform_points(40, 2, rng);
  const LocalGP m = LocalGP::fit(xs, sine_targets(xs), hp);
  for (const auto& p : uniform_points(300, 2, rng, -1.0, 2.0)) {
    const double v = m.predict_var(p);
    EXPECT_GE(v, -1e-10);
    EXPECT_LE(v, 1.5 * 1.5 + 1e-10);
  }
  EXPECT_NEAR(m.predict_var(std::vector{100.0, 100.0}), 1.5 * 1.5, 1e-6);
}

TEST(LocalGP, InterpolationLimitGivesTinyVariance) {
  std::mt19937_64 rng(23);
  auto hp = make_isotropic(1, 1, 1.0, 0.5, 1e-6);
  const auto xs = uniform_points(5, 1, rng);
  const LocalGP m = LocalGP::fit(xs, sine_targets(xs), hp);
  const DenseGP oracle(xs, sine_targets(xs), hp);
  for (const auto& x : xs) {
    EXPECT_LE(m.predict_var(x), 1e-8);
    EXPECT_LE(std::abs(oracle.variance(x)), 1e-8);
  }
}

TEST(LocalGP, NoisyGramHasEigenvaluesAboveNoiseFloor) {
  std::mt19937_64 rng(29);
  auto hp = make_isotropic(3, 1, 1.2, 0.5, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto xs = uniform_points(50, 3, rng);
    const DenseGP oracle(xs, sine_targets(xs), hp);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(oracle.gram());
    EXPECT_GE(eig.eigenvalues().minCoeff(), hp.noise_variance() * (1 - 1e-8));
  }
}

TEST(LocalGP, JitterRescuesNearSingularSchurComplement) {
  // sigma_n tiny relative to sigma_f and a repeated input: the Schur complement
  // of the duplicate is ~1e-40 * sigma_f^2 and cancels to <= 0 in doubles.
  Hyperparameters hp = make_isotropic(1, 1, 1e3, 1.0, 1e-17);
  LocalGP m(hp);
  m.add_point(std::vector{0.0}, std::vector{1.0});
  m.add_point(std::vector{0.0}, std::vector{1.0});
  EXPECT_EQ(m.size(), 2u);
  EXPECT_GT(m.applied_jitter(), 0.0);
  EXPECT_TRUE(std::isfinite(m.predict_mean(std::vector{0.0})[0]));
}

TEST(LocalGP, DimensionMismatchOnPredict) {
  const LocalGP m(make_isotropic(2, 1, 1.0, 1.0, 0.1));
  try {
    m.predict_mean(std::vector{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
  EXPECT_THROW(m.predict_var(std::vector{1.0, 2.0, 3.0}), Error);
}
