#include "gpnode/tree/loggp_tree.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gpnode/error.hpp"

namespace gpnode::tree {

namespace {

constexpr double kMinOverlapWidth = 1e-12;

}  // namespace

void TreeConfig::validate() const {
  if (max_leaves < 1) throw Error(ErrorCode::invalid_config, "max_leaves must be at least 1");
  if (max_local_data < 2) {
    throw Error(ErrorCode::invalid_config,
                fmt::format("max_local_data must be at least 2, got {}", max_local_data));
  }
  if (!(overlap_ratio > 0.0 && overlap_ratio < 1.0)) {
    throw Error(ErrorCode::invalid_config,
                fmt::format("overlap_ratio must lie in (0, 1), got {}", overlap_ratio));
  }
  hp.validate();
}

double Split::gate_left(std::span<const double> x) const noexcept {
  return std::clamp(0.5 + (value - x[dim]) / overlap_width, 0.0, 1.0);
}

SplitRule choose_split(const gp::LocalGP& model, double overlap_ratio) {
  const std::size_t n = model.size();
  const std::size_t d_in = model.hyperparameters().d_in;
  if (n == 0) throw Error(ErrorCode::logic, "choose_split: leaf is empty");

  const auto inputs = model.inputs();
  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t d = 0; d < d_in; ++d) {
    const auto row = inputs.row(static_cast<Eigen::Index>(d));
    const double spread = row.maxCoeff() - row.minCoeff();
    if (spread > best_spread) {
      best_spread = spread;
      best_dim = d;
    }
  }

  std::vector<double> coords(n);
  for (std::size_t i = 0; i < n; ++i) coords[i] = inputs(static_cast<Eigen::Index>(best_dim), static_cast<Eigen::Index>(i));
  std::sort(coords.begin(), coords.end());
  const double median = n % 2 == 1 ? coords[n / 2] : 0.5 * (coords[n / 2 - 1] + coords[n / 2]);

  return {best_dim, median, std::max(overlap_ratio * best_spread, kMinOverlapWidth)};
}

LogGPTree::LogGPTree(TreeConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  reset();
}

void LogGPTree::reset() {
  nodes_.clear();
  nodes_.emplace_back(Leaf{gp::LocalGP(cfg_.hp)});
  leaf_count_ = 1;
  rng_.seed(cfg_.rng_seed);
}

void LogGPTree::check_dims(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != cfg_.hp.d_in) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("input has length {}, tree expects {}", x.size(), cfg_.hp.d_in));
  }
  if (y.size() != cfg_.hp.d_out) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("output has length {}, tree expects {}", y.size(), cfg_.hp.d_out));
  }
}

std::size_t LogGPTree::route(std::size_t from, std::span<const double> x) {
  std::size_t node = from;
  while (const auto* s = std::get_if<Split>(&nodes_[node])) {
    node = uniform_unit(rng_) < s->gate_left(x) ? s->left : s->right;
  }
  return node;
}

InsertOutcome LogGPTree::insert(std::span<const double> x, std::span<const double> y) {
  check_dims(x, y);
  InsertOutcome out;
  std::size_t node = route(root(), x);

  if (std::get<Leaf>(nodes_[node]).model.size() >= cfg_.max_local_data) {
    if (leaf_count_ >= cfg_.max_leaves) return out;
    split_leaf(node);
    out.split_occurred = true;
    const Split s = std::get<Split>(nodes_[node]);
    node = route(node, x);
    // Every point of the old leaf may have landed on one side; the sibling
    // is then empty and takes the sample.
    if (std::get<Leaf>(nodes_[node]).model.size() >= cfg_.max_local_data) {
      node = node == s.left ? s.right : s.left;
    }
  }

  std::get<Leaf>(nodes_[node]).model.add_point(x, y);
  out.stored = true;
  out.leaf_id = node;
  return out;
}

void LogGPTree::split_leaf(std::size_t node) {
  auto* leaf = std::get_if<Leaf>(&nodes_.at(node));
  if (leaf == nullptr) throw Error(ErrorCode::logic, fmt::format("split_leaf: node {} is not a leaf", node));
  if (leaf->model.size() != cfg_.max_local_data) {
    throw Error(ErrorCode::logic, fmt::format("split_leaf: leaf {} holds {} points, expected {}", node,
                                              leaf->model.size(), cfg_.max_local_data));
  }
  if (leaf_count_ >= cfg_.max_leaves) {
    throw Error(ErrorCode::logic, fmt::format("split_leaf: leaf budget of {} exhausted", cfg_.max_leaves));
  }

  gp::LocalGP old = std::move(leaf->model);
  const SplitRule rule = choose_split(old, cfg_.overlap_ratio);
  Split split{rule.dim, rule.value, rule.overlap_width, nodes_.size(), nodes_.size() + 1};

  std::vector<std::vector<double>> xs[2];
  std::vector<std::vector<double>> ys[2];
  for (std::size_t i = 0; i < old.size(); ++i) {
    const auto x = old.input(i);
    const int side = uniform_unit(rng_) < split.gate_left(x) ? 0 : 1;
    xs[side].emplace_back(x.begin(), x.end());
    ys[side].push_back(old.output(i));
  }

  nodes_[node] = split;
  for (int side = 0; side < 2; ++side) {
    if (xs[side].empty()) {
      nodes_.emplace_back(Leaf{gp::LocalGP(cfg_.hp)});
    } else {
      nodes_.emplace_back(Leaf{gp::LocalGP::fit(xs[side], ys[side], cfg_.hp)});
    }
  }
  ++leaf_count_;
}

std::vector<std::pair<std::size_t, double>> LogGPTree::leaf_weights(std::span<const double> x) const {
  if (x.size() != cfg_.hp.d_in) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("input has length {}, tree expects {}", x.size(), cfg_.hp.d_in));
  }
  std::vector<std::pair<std::size_t, double>> out;
  std::vector<std::pair<std::size_t, double>> stack{{root(), 1.0}};
  while (!stack.empty()) {
    const auto [node, w] = stack.back();
    stack.pop_back();
    if (const auto* s = std::get_if<Split>(&nodes_[node])) {
      const double g = s->gate_left(x);
      stack.emplace_back(s->right, w * (1.0 - g));
      stack.emplace_back(s->left, w * g);
    } else {
      out.emplace_back(node, w);
    }
  }
  return out;
}

std::vector<double> LogGPTree::predict(std::span<const double> x) const {
  if (x.size() != cfg_.hp.d_in) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("input has length {}, tree expects {}", x.size(), cfg_.hp.d_in));
  }
  std::vector<double> acc(cfg_.hp.d_out, 0.0);
  double total = 0.0;
  std::vector<std::pair<std::size_t, double>> stack{{root(), 1.0}};
  while (!stack.empty()) {
    const auto [node, w] = stack.back();
    stack.pop_back();
    if (const auto* s = std::get_if<Split>(&nodes_[node])) {
      const double g = s->gate_left(x);
      if (g < 1.0) stack.emplace_back(s->right, w * (1.0 - g));
      if (g > 0.0) stack.emplace_back(s->left, w * g);
      continue;
    }
    const auto& model = std::get<Leaf>(nodes_[node]).model;
    if (model.empty() || !(w > 0.0)) continue;
    const auto mu = model.predict_mean(x);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += w * mu[j];
    total += w;
  }
  if (total > 0.0) {
    for (auto& v : acc) v /= total;
  }
  return acc;
}

TreeStats LogGPTree::stats() const {
  TreeStats st{leaf_count_, 0, 0};
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root(), 0}};
  while (!stack.empty()) {
    const auto [node, depth] = stack.back();
    stack.pop_back();
    if (const auto* s = std::get_if<Split>(&nodes_[node])) {
      stack.emplace_back(s->left, depth + 1);
      stack.emplace_back(s->right, depth + 1);
    } else {
      st.stored_points += std::get<Leaf>(nodes_[node]).model.size();
      st.depth = std::max(st.depth, depth);
    }
  }
  return st;
}

}  // namespace gpnode::tree
