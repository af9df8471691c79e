#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gpnode/gp/hyperparameters.hpp"
#include "gpnode/tree/loggp_tree.hpp"

namespace gpnode::service {

/// Named bundle of dimensions, hyperparameters, and capacity limits.
struct Preset {
  std::string name;
  std::string description;
  gp::Hyperparameters hp;
  std::size_t max_leaves = 16;
  std::size_t max_local_data = 64;

  void validate() const;
  /// Writes dimensions, hyperparameters and capacities into `cfg`; keeps
  /// overlap_ratio and rng_seed.
  void apply_to(tree::TreeConfig& cfg) const;
};

/// Parses one preset document (JSON object, schema in docs/presets.md).
/// Throws Error(invalid_config) with the offending key on schema violations.
Preset parse_preset(const std::string& text);
std::string serialize_preset(const Preset& p);

/// Directory of `<Name>.json` preset documents.
class PresetStore {
 public:
  explicit PresetStore(std::filesystem::path dir);

  std::vector<std::string> names() const;
  /// Throws Error(not_found) listing the available presets.
  Preset load(const std::string& name) const;
  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace gpnode::service
