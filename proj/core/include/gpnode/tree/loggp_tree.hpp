#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "gpnode/gp/hyperparameters.hpp"
#include "gpnode/gp/local_gp.hpp"
#include "gpnode/random.hpp"

namespace gpnode::tree {

struct TreeConfig {
  std::size_t max_leaves = 16;      // local models
  std::size_t max_local_data = 64;  // samples per local model
  double overlap_ratio = 0.1;
  std::uint64_t rng_seed = 1;
  gp::Hyperparameters hp;

  void validate() const;
  bool operator==(const TreeConfig&) const = default;
};

struct InsertOutcome {
  bool stored = false;
  bool split_occurred = false;
  std::optional<std::size_t> leaf_id;
};

struct TreeStats {
  std::size_t leaves = 1;
  std::size_t stored_points = 0;
  std::size_t depth = 0;

  bool operator==(const TreeStats&) const = default;
};

/// Gating node: routes by one coordinate with a linear ramp of total width
/// `overlap_width` centred on `split_value`.
struct Split {
  std::size_t dim = 0;
  double value = 0.0;
  double overlap_width = 1.0;
  std::size_t left = 0;
  std::size_t right = 0;

  /// Probability of the left child: clamp(0.5 + (value - x[dim]) / width, 0, 1).
  double gate_left(std::span<const double> x) const noexcept;
};

struct Leaf {
  gp::LocalGP model;
};

/// Locally growing tree of local GP experts.
///
/// Training samples descend from the root, taking the left branch with the
/// gate probability (seeded, reproducible). A full leaf splits at the median
/// of its widest coordinate while the leaf budget lasts; once the budget is
/// spent, samples that land on a full leaf are dropped. Prediction blends all
/// reachable non-empty leaves by the product of gate probabilities along each
/// path and involves no randomness.
///
/// Single writer: insert/reset must not overlap with each other or predict.
class LogGPTree {
 public:
  explicit LogGPTree(TreeConfig cfg);

  InsertOutcome insert(std::span<const double> x, std::span<const double> y);
  std::vector<double> predict(std::span<const double> x) const;
  void reset();
  TreeStats stats() const;

  /// Path-product weight for every leaf, keyed by node id (empty leaves included).
  std::vector<std::pair<std::size_t, double>> leaf_weights(std::span<const double> x) const;

  const TreeConfig& config() const noexcept { return cfg_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  bool is_leaf(std::size_t node) const { return std::holds_alternative<Leaf>(nodes_.at(node)); }
  const Leaf& leaf(std::size_t node) const { return std::get<Leaf>(nodes_.at(node)); }
  const Split& split(std::size_t node) const { return std::get<Split>(nodes_.at(node)); }
  static constexpr std::size_t root() noexcept { return 0; }

  /// Turns a full leaf into a gating node with two freshly fitted children.
  /// Exposed for tests; `insert` calls it when a full leaf is reached.
  void split_leaf(std::size_t node);

 private:
  using Node = std::variant<Leaf, Split>;

  void check_dims(std::span<const double> x, std::span<const double> y) const;
  std::size_t route(std::size_t from, std::span<const double> x);

  TreeConfig cfg_;
  std::vector<Node> nodes_;
  std::size_t leaf_count_ = 1;
  std::mt19937_64 rng_;
};

/// Split rule applied to a set of points: widest coordinate (lowest index on
/// ties), its median (midpoint of the middle pair for even counts), and an
/// overlap band of `overlap_ratio * spread`, floored at 1e-12.
struct SplitRule {
  std::size_t dim;
  double value;
  double overlap_width;
};
SplitRule choose_split(const gp::LocalGP& model, double overlap_ratio);

}  // namespace gpnode::tree
