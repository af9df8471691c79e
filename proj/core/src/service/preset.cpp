#include "gpnode/service/preset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "gpnode/error.hpp"
#include "gpnode/service/json_codec.hpp"

namespace gpnode::service {

namespace fs = std::filesystem;
using nlohmann::json;

void Preset::validate() const {
  if (name.empty()) throw Error(ErrorCode::invalid_config, "preset name is empty");
  tree::TreeConfig cfg;
  apply_to(cfg);
  cfg.validate();
}

void Preset::apply_to(tree::TreeConfig& cfg) const {
  cfg.hp = hp;
  cfg.max_leaves = max_leaves;
  cfg.max_local_data = max_local_data;
}

Preset parse_preset(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_config, fmt::format("preset is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::invalid_config, "preset must be a JSON object");
  for (const char* key : {"name", "d_in", "d_out", "sigma_f", "length_scales", "sigma_n", "max_leaves",
                          "max_local_data"}) {
    if (!j.contains(key)) throw Error(ErrorCode::invalid_config, fmt::format("preset is missing '{}'", key));
  }

  Preset p;
  try {
    p.name = j.at("name").get<std::string>();
    p.description = j.value("description", std::string{});
    p.max_leaves = j.at("max_leaves").get<std::size_t>();
    p.max_local_data = j.at("max_local_data").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_config, fmt::format("preset field has the wrong type: {}", e.what()));
  }
  p.hp = hyperparameters_from_json(j);
  p.validate();
  return p;
}

std::string serialize_preset(const Preset& p) {
  json j = to_json(p.hp);
  j["name"] = p.name;
  j["description"] = p.description;
  j["max_leaves"] = p.max_leaves;
  j["max_local_data"] = p.max_local_data;
  return j.dump(2);
}

PresetStore::PresetStore(fs::path dir) : dir_(std::move(dir)) {}

std::vector<std::string> PresetStore::names() const {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Preset PresetStore::load(const std::string& name) const {
  const auto available = names();
  if (std::find(available.begin(), available.end(), name) == available.end()) {
    throw Error(ErrorCode::not_found,
                fmt::format("no preset named '{}'; available: {}", name, fmt::join(available, ", ")));
  }
  const fs::path file = dir_ / (name + ".json");
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot read {}", file.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  Preset p = parse_preset(buf.str());
  if (p.name != name) {
    throw Error(ErrorCode::invalid_config,
                fmt::format("{} declares name '{}', expected '{}'", file.string(), p.name, name));
  }
  return p;
}

}  // namespace gpnode::service
