#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gpnode/gp/hyperparameters.hpp"

namespace gpnode::gp {

/// Jitter schedule used when the noisy Gram matrix fails to factor: the
/// diagonal is bumped by 1e-10 * sigma_f^2, then x10 per retry, four retries.
struct JitterPolicy {
  double initial_scale = 1e-10;
  double growth = 10.0;
  int max_retries = 4;
};

/// One exact GP expert with d_out outputs sharing a single Cholesky factor.
///
/// Inputs are stored column-wise (d_in x n), outputs row-wise (n x d_out).
/// Storage grows geometrically so `add_point` costs O(n^2) amortized: one
/// forward substitution for the new factor row and one triangular solve pair
/// per output for the weights.
///
/// Not safe for concurrent mutation; reads and writes must be serialized.
class LocalGP {
 public:
  explicit LocalGP(Hyperparameters hp, JitterPolicy jitter = {});

  /// Batch construction. `xs` and `ys` are the training pairs in order.
  static LocalGP fit(std::span<const std::vector<double>> xs, std::span<const std::vector<double>> ys,
                     const Hyperparameters& hp, JitterPolicy jitter = {});

  /// Appends one training pair by extending the factor by one row.
  void add_point(std::span<const double> x, std::span<const double> y);

  /// Posterior mean of every output; the zero vector for an empty model.
  std::vector<double> predict_mean(std::span<const double> x) const;

  /// Latent posterior variance (noise excluded); sigma_f^2 for an empty model.
  double predict_var(std::span<const double> x) const;

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  const Hyperparameters& hyperparameters() const noexcept { return hp_; }

  // Views onto the live part of the storage.
  Eigen::Ref<const Eigen::MatrixXd> inputs() const { return inputs_.leftCols(n_); }
  Eigen::Ref<const Eigen::MatrixXd> outputs() const { return outputs_.topRows(n_); }
  Eigen::Ref<const Eigen::MatrixXd> cholesky() const { return chol_.topLeftCorner(n_, n_); }
  Eigen::Ref<const Eigen::MatrixXd> alphas() const { return alpha_.topRows(n_); }

  std::span<const double> input(std::size_t i) const {
    return {inputs_.col(static_cast<Eigen::Index>(i)).data(), hp_.d_in};
  }
  std::vector<double> output(std::size_t i) const;

  /// Largest diagonal jitter that had to be applied so far (0 for well-posed data).
  double applied_jitter() const noexcept { return max_jitter_; }

 private:
  void reserve(std::size_t capacity);
  void check_input(std::span<const double> x, const char* what) const;
  Eigen::VectorXd cross_kernel(const double* x) const;
  void solve_alphas();

  Hyperparameters hp_;
  JitterPolicy jitter_;
  std::size_t n_ = 0;
  double max_jitter_ = 0.0;
  Eigen::MatrixXd inputs_;   // d_in x capacity
  Eigen::MatrixXd outputs_;  // capacity x d_out
  Eigen::MatrixXd chol_;     // capacity x capacity, lower triangle live
  Eigen::MatrixXd proj_;     // capacity x d_out, L^{-1} Y
  Eigen::MatrixXd alpha_;    // capacity x d_out, L^{-T} L^{-1} Y
};

}  // namespace gpnode::gp
