#include "gpnode/service/json_codec.hpp"

#include <fmt/format.h>

#include "gpnode/error.hpp"

namespace gpnode::service {

using nlohmann::json;

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_config, fmt::format("field '{}': {}", key, e.what()));
  }
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_config, fmt::format("{} must be a JSON object", what));
}

}  // namespace

json to_json(const gp::Hyperparameters& hp) {
  return {{"d_in", hp.d_in},       {"d_out", hp.d_out},     {"sigma_f", hp.sigma_f},
          {"sigma_n", hp.sigma_n}, {"length_scales", hp.length_scales}};
}

json to_json(const tree::TreeConfig& cfg) {
  json j = to_json(cfg.hp);
  j["max_leaves"] = cfg.max_leaves;
  j["max_local_data"] = cfg.max_local_data;
  j["overlap_ratio"] = cfg.overlap_ratio;
  j["rng_seed"] = cfg.rng_seed;
  return j;
}

json to_json(const EndpointConfig& ep) {
  return {{"read_ip", ep.read_ip},
          {"read_port", ep.read_port},
          {"send_ip", ep.send_ip},
          {"send_port", ep.send_port},
          {"listen_rate_hz", ep.listen_rate_hz}};
}

json to_json(const Metrics& m) {
  json j = {{"received_quantity", m.received_quantity},
            {"stored_quantity", m.stored_quantity},
            {"malformed_quantity", m.malformed_quantity},
            {"command_quantity", m.command_quantity},
            {"replies_sent", m.replies_sent},
            {"send_failures", m.send_failures},
            {"dropped_samples", m.dropped_samples},
            {"last_read_time", m.last_read_time},
            {"last_compute_time", m.last_compute_time},
            {"last_send_time", m.last_send_time},
            {"mean_read_time", m.mean_read_time},
            {"mean_compute_time", m.mean_compute_time},
            {"mean_send_time", m.mean_send_time},
            {"leaves", m.leaves},
            {"depth", m.depth}};
  j["last_command_value"] = m.last_command_value ? json(*m.last_command_value) : json(nullptr);
  return j;
}

gp::Hyperparameters hyperparameters_from_json(const json& j, gp::Hyperparameters base) {
  require_object(j, "hyperparameters");
  read_field(j, "d_in", base.d_in);
  read_field(j, "d_out", base.d_out);
  read_field(j, "sigma_f", base.sigma_f);
  read_field(j, "sigma_n", base.sigma_n);
  if (j.contains("length_scales")) {
    const json& ls = j.at("length_scales");
    if (ls.is_number()) {
      base.length_scales.assign(base.d_in, ls.get<double>());
    } else {
      read_field(j, "length_scales", base.length_scales);
    }
  } else if (base.length_scales.size() != base.d_in) {
    // d_in changed without new scales: one field per dimension, unit default.
    base.length_scales.resize(base.d_in, 1.0);
  }
  return base;
}

tree::TreeConfig tree_config_from_json(const json& j, tree::TreeConfig base) {
  require_object(j, "tree config");
  base.hp = hyperparameters_from_json(j, base.hp);
  read_field(j, "max_leaves", base.max_leaves);
  read_field(j, "max_local_data", base.max_local_data);
  read_field(j, "overlap_ratio", base.overlap_ratio);
  read_field(j, "rng_seed", base.rng_seed);
  return base;
}

EndpointConfig endpoint_from_json(const json& j, EndpointConfig base) {
  require_object(j, "endpoint");
  read_field(j, "read_ip", base.read_ip);
  read_field(j, "read_port", base.read_port);
  read_field(j, "send_ip", base.send_ip);
  read_field(j, "send_port", base.send_port);
  read_field(j, "listen_rate_hz", base.listen_rate_hz);
  return base;
}

}  // namespace gpnode::service
