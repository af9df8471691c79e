#pragma once

#include <nlohmann/json.hpp>

#include "gpnode/gp/hyperparameters.hpp"
#include "gpnode/service/endpoint.hpp"
#include "gpnode/service/metrics.hpp"
#include "gpnode/tree/loggp_tree.hpp"

// JSON mappings shared by the admin API, the config file and presets.
// Decoders throw Error(invalid_config) naming the bad key.

namespace gpnode::service {

nlohmann::json to_json(const gp::Hyperparameters& hp);
nlohmann::json to_json(const tree::TreeConfig& cfg);
nlohmann::json to_json(const EndpointConfig& ep);
nlohmann::json to_json(const Metrics& m);

/// Fields missing from `j` keep the values already in `base`.
gp::Hyperparameters hyperparameters_from_json(const nlohmann::json& j, gp::Hyperparameters base = {});
tree::TreeConfig tree_config_from_json(const nlohmann::json& j, tree::TreeConfig base = {});
EndpointConfig endpoint_from_json(const nlohmann::json& j, EndpointConfig base = {});

}  // namespace gpnode::service
