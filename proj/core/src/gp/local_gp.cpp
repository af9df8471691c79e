#include "gpnode/gp/local_gp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include "gpnode/error.hpp"
#include "gpnode/gp/kernel.hpp"

namespace gpnode::gp {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

}  // namespace

LocalGP::LocalGP(Hyperparameters hp, JitterPolicy jitter) : hp_(std::move(hp)), jitter_(jitter) {
  hp_.validate();
  inputs_.resize(idx(hp_.d_in), 0);
  outputs_.resize(0, idx(hp_.d_out));
  proj_.resize(0, idx(hp_.d_out));
  alpha_.resize(0, idx(hp_.d_out));
}

void LocalGP::reserve(std::size_t capacity) {
  const auto cap = idx(capacity);
  if (cap <= inputs_.cols()) return;
  const auto n = idx(n_);
  const auto d_in = idx(hp_.d_in);
  const auto d_out = idx(hp_.d_out);

  Eigen::MatrixXd inputs(d_in, cap);
  Eigen::MatrixXd outputs(cap, d_out);
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(cap, cap);
  Eigen::MatrixXd proj(cap, d_out);
  Eigen::MatrixXd alpha(cap, d_out);
  inputs.leftCols(n) = inputs_.leftCols(n);
  outputs.topRows(n) = outputs_.topRows(n);
  chol.topLeftCorner(n, n) = chol_.topLeftCorner(n, n);
  proj.topRows(n) = proj_.topRows(n);
  alpha.topRows(n) = alpha_.topRows(n);
  inputs_.swap(inputs);
  outputs_.swap(outputs);
  chol_.swap(chol);
  proj_.swap(proj);
  alpha_.swap(alpha);
}

void LocalGP::check_input(std::span<const double> x, const char* what) const {
  if (x.size() != hp_.d_in) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("{}: input has length {}, model expects {}", what, x.size(), hp_.d_in));
  }
}

Eigen::VectorXd LocalGP::cross_kernel(const double* x) const {
  Eigen::VectorXd k(idx(n_));
  const double sf2 = hp_.signal_variance();
  for (std::size_t i = 0; i < n_; ++i) {
    k(idx(i)) = kernel_eval_unchecked(inputs_.col(idx(i)).data(), x, hp_.length_scales.data(), hp_.d_in, sf2);
  }
  return k;
}

void LocalGP::solve_alphas() {
  const auto n = idx(n_);
  alpha_.topRows(n) =
      chol_.topLeftCorner(n, n).triangularView<Eigen::Lower>().transpose().solve(proj_.topRows(n));
}

LocalGP LocalGP::fit(std::span<const std::vector<double>> xs, std::span<const std::vector<double>> ys,
                     const Hyperparameters& hp, JitterPolicy jitter) {
  LocalGP model(hp, jitter);
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("fit: {} inputs but {} outputs", xs.size(), ys.size()));
  }
  if (xs.empty()) throw Error(ErrorCode::invalid_argument, "fit: training set is empty");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    model.check_input(xs[i], "fit");
    if (ys[i].size() != hp.d_out) {
      throw Error(ErrorCode::invalid_argument,
                  fmt::format("fit: output {} has length {}, model expects {}", i, ys[i].size(), hp.d_out));
    }
  }

  const std::size_t n = xs.size();
  model.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(xs[i].begin(), xs[i].end(), model.inputs_.col(idx(i)).data());
    for (std::size_t j = 0; j < hp.d_out; ++j) model.outputs_(idx(i), idx(j)) = ys[i][j];
  }
  model.n_ = n;

  Eigen::MatrixXd gram(idx(n), idx(n));
  const double sf2 = hp.signal_variance();
  for (std::size_t i = 0; i < n; ++i) {
    gram(idx(i), idx(i)) = sf2 + hp.noise_variance();
    for (std::size_t j = 0; j < i; ++j) {
      const double k = kernel_eval_unchecked(model.inputs_.col(idx(i)).data(), model.inputs_.col(idx(j)).data(),
                                             hp.length_scales.data(), hp.d_in, sf2);
      gram(idx(i), idx(j)) = k;
      gram(idx(j), idx(i)) = k;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  double added = 0.0;
  std::string attempts;
  for (int retry = 0; llt.info() != Eigen::Success; ++retry) {
    if (retry >= jitter.max_retries) {
      throw Error(ErrorCode::numerical,
                  fmt::format("fit: Gram matrix of {} points not positive definite; tried jitter {}", n, attempts));
    }
    added = jitter.initial_scale * sf2 * std::pow(jitter.growth, retry);
    attempts += fmt::format("{}{:g}", attempts.empty() ? "" : ", ", added);
    Eigen::MatrixXd bumped = gram;
    bumped.diagonal().array() += added;
    llt.compute(bumped);
  }
  model.max_jitter_ = added;

  model.chol_.topLeftCorner(idx(n), idx(n)) = llt.matrixL();
  model.proj_.topRows(idx(n)) =
      model.chol_.topLeftCorner(idx(n), idx(n)).triangularView<Eigen::Lower>().solve(model.outputs_.topRows(idx(n)));
  model.solve_alphas();
  return model;
}

void LocalGP::add_point(std::span<const double> x, std::span<const double> y) {
  check_input(x, "add_point");
  if (y.size() != hp_.d_out) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("add_point: output has length {}, model expects {}", y.size(), hp_.d_out));
  }
  if (n_ == static_cast<std::size_t>(inputs_.cols())) reserve(std::max<std::size_t>(8, 2 * n_));

  const auto n = idx(n_);
  Eigen::VectorXd row = cross_kernel(x.data());
  if (n > 0) chol_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solveInPlace(row);

  const double sf2 = hp_.signal_variance();
  const double base = sf2 + hp_.noise_variance() - row.squaredNorm();
  double diag_sq = base;
  double added = 0.0;
  for (int retry = 0; !(diag_sq > 0.0); ++retry) {
    if (retry >= jitter_.max_retries) {
      throw Error(ErrorCode::numerical,
                  fmt::format("add_point: Schur complement {} not positive after jitter up to {:g}", base, added));
    }
    added = jitter_.initial_scale * sf2 * std::pow(jitter_.growth, retry);
    diag_sq = base + added;
  }
  max_jitter_ = std::max(max_jitter_, added);
  const double diag = std::sqrt(diag_sq);

  std::copy(x.begin(), x.end(), inputs_.col(n).data());
  chol_.row(n).head(n) = row.transpose();
  chol_(n, n) = diag;
  for (std::size_t j = 0; j < hp_.d_out; ++j) {
    const auto c = idx(j);
    outputs_(n, c) = y[j];
    const double dot = n > 0 ? row.dot(proj_.col(c).head(n)) : 0.0;
    proj_(n, c) = (y[j] - dot) / diag;
  }
  ++n_;
  solve_alphas();
}

std::vector<double> LocalGP::predict_mean(std::span<const double> x) const {
  check_input(x, "predict_mean");
  std::vector<double> mu(hp_.d_out, 0.0);
  if (n_ == 0) return mu;
  const Eigen::VectorXd k = cross_kernel(x.data());
  const auto n = idx(n_);
  for (std::size_t j = 0; j < hp_.d_out; ++j) mu[j] = k.dot(alpha_.col(idx(j)).head(n));
  return mu;
}

double LocalGP::predict_var(std::span<const double> x) const {
  check_input(x, "predict_var");
  const double prior = hp_.signal_variance();
  if (n_ == 0) return prior;
  Eigen::VectorXd v = cross_kernel(x.data());
  const auto n = idx(n_);
  chol_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solveInPlace(v);
  return std::clamp(prior - v.squaredNorm(), 0.0, prior);
}

std::vector<double> LocalGP::output(std::size_t i) const {
  std::vector<double> y(hp_.d_out);
  for (std::size_t j = 0; j < hp_.d_out; ++j) y[j] = outputs_(idx(i), idx(j));
  return y;
}

}  // namespace gpnode::gp
