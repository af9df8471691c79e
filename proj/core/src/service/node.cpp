#include "gpnode/service/node.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "gpnode/error.hpp"
#include "gpnode/service/json_codec.hpp"

namespace gpnode::service {

namespace fs = std::filesystem;
using nlohmann::json;

NodeConfig NodeConfig::defaults() {
  NodeConfig cfg;
  for (int i = 0; i < kDefaultSlotCount; ++i) {
    SlotConfig s;
    s.id = i;
    s.endpoint = default_endpoint(i);
    s.tree.rng_seed = cfg.seed;
    cfg.slots.push_back(std::move(s));
  }
  return cfg;
}

NodeConfig parse_node_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_config, "node config must be a JSON object");
  NodeConfig cfg = NodeConfig::defaults();
  try {
    if (const auto it = j.find("admin"); it != j.end()) {
      cfg.admin_ip = it->value("ip", cfg.admin_ip);
      cfg.admin_port = it->value("port", cfg.admin_port);
    }
    if (j.contains("preset_dir")) cfg.preset_dir = j.at("preset_dir").get<std::string>();
    if (j.contains("console_dir")) cfg.console_dir = fs::path(j.at("console_dir").get<std::string>());
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_config, fmt::format("node config: {}", e.what()));
  }
  if (cfg.preset_dir.is_relative() && !base_dir.empty()) cfg.preset_dir = base_dir / cfg.preset_dir;
  if (cfg.console_dir && cfg.console_dir->is_relative() && !base_dir.empty()) {
    cfg.console_dir = base_dir / *cfg.console_dir;
  }
  for (auto& s : cfg.slots) s.tree.rng_seed = cfg.seed;

  if (const auto it = j.find("slots"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::invalid_config, "'slots' must be an array");
    std::vector<SlotConfig> slots;
    std::set<int> seen;
    for (const json& entry : *it) {
      if (!entry.is_object()) throw Error(ErrorCode::invalid_config, "each slot must be a JSON object");
      SlotConfig s;
      try {
        s.id = entry.value("id", static_cast<int>(slots.size()));
        s.autostart = entry.value("autostart", false);
        if (entry.contains("preset")) s.preset = entry.at("preset").get<std::string>();
      } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_config, fmt::format("slot entry: {}", e.what()));
      }
      if (s.id < 0 || !seen.insert(s.id).second) {
        throw Error(ErrorCode::invalid_config, fmt::format("slot id {} is negative or duplicated", s.id));
      }
      s.endpoint = default_endpoint(s.id);
      s.tree.rng_seed = cfg.seed;
      if (entry.contains("endpoint")) s.endpoint = endpoint_from_json(entry.at("endpoint"), s.endpoint);
      if (entry.contains("tree")) s.tree = tree_config_from_json(entry.at("tree"), s.tree);
      slots.push_back(std::move(s));
    }
    cfg.slots = std::move(slots);
  }
  return cfg;
}

NodeConfig load_node_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::not_found, fmt::format("cannot open config file {}", file.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_config, fmt::format("{}: {}", file.string(), e.what()));
  }
  return parse_node_config(j, file.parent_path());
}

Node::Node(NodeConfig cfg) : cfg_(std::move(cfg)), presets_(cfg_.preset_dir) {
  for (const auto& s : cfg_.slots) slots_.push_back(std::make_unique<ModelSlot>(s.id, s.tree, s.endpoint));
}

Node::~Node() { stop_all(); }

ModelSlot& Node::slot(int id) {
  for (auto& s : slots_) {
    if (s->id() == id) return *s;
  }
  throw Error(ErrorCode::not_found, fmt::format("no slot with id {}", id));
}

const ModelSlot& Node::slot(int id) const { return const_cast<Node*>(this)->slot(id); }

std::vector<int> Node::slot_ids() const {
  std::vector<int> ids;
  for (const auto& s : slots_) ids.push_back(s->id());
  return ids;
}

void Node::apply_configured_presets() {
  for (const auto& s : cfg_.slots) {
    if (s.preset) slot(s.id).apply_preset(presets_.load(*s.preset));
  }
}

void Node::autostart(bool all) {
  for (const auto& s : cfg_.slots) {
    if (!all && !s.autostart) continue;
    auto& slot = this->slot(s.id);
    slot.activate_udp();
    slot.activate_gp();
    slot.start();
  }
}

void Node::stop_all() {
  for (auto& s : slots_) s->stop();
}

}  // namespace gpnode::service
