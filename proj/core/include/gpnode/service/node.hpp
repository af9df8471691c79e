#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpnode/service/preset.hpp"
#include "gpnode/service/slot.hpp"

namespace gpnode::service {

inline constexpr int kDefaultSlotCount = 4;
inline constexpr int kDefaultAdminPort = 8088;

struct SlotConfig {
  int id = 0;
  std::optional<std::string> preset;
  tree::TreeConfig tree;
  EndpointConfig endpoint;
  bool autostart = false;
};

/// Node-wide settings: admin listener, preset directory and the slots.
/// Loaded from a JSON document (docs/configuration.md); command-line flags
/// are applied on top by the gpserve tool.
struct NodeConfig {
  std::string admin_ip = "127.0.0.1";
  int admin_port = kDefaultAdminPort;
  std::filesystem::path preset_dir = "presets";
  std::optional<std::filesystem::path> console_dir;
  std::uint64_t seed = 1;
  std::vector<SlotConfig> slots;

  /// Four slots on ports 8000+i / 8050+i with the built-in tree defaults.
  static NodeConfig defaults();
};

/// Fills every unspecified field from `NodeConfig::defaults()`; a relative
/// preset_dir is resolved against `base_dir`.
NodeConfig parse_node_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
NodeConfig load_node_config(const std::filesystem::path& file);

/// Registry of model slots plus the preset store.
class Node {
 public:
  explicit Node(NodeConfig cfg);
  ~Node();

  std::size_t slot_count() const noexcept { return slots_.size(); }
  /// Throws Error(not_found) for an unknown id.
  ModelSlot& slot(int id);
  const ModelSlot& slot(int id) const;
  std::vector<int> slot_ids() const;

  const PresetStore& presets() const noexcept { return presets_; }
  const NodeConfig& config() const noexcept { return cfg_; }

  /// Resolves presets named in the config into each slot's tree config.
  void apply_configured_presets();
  /// Turns UDP and GP on and starts every slot flagged `autostart`
  /// (all slots when `all` is set).
  void autostart(bool all = false);
  void stop_all();

 private:
  NodeConfig cfg_;
  PresetStore presets_;
  std::vector<std::unique_ptr<ModelSlot>> slots_;
};

}  // namespace gpnode::service
