#pragma once

#include <json.hpp>

#include "huntil/scenarios.hpp"

namespace huntil {

// Systems, propositions, and certificates described as a structured config
// document: coordinate names, constraint expressions per set region, flow and
// jump expressions per coordinate, certificate expressions with constants.
// Unknown fields are ignored; missing required fields raise ConfigError with
// the offending path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

Scenario load_config(const nlohmann::json& doc);
Scenario load_config_file(const std::string& path);

// Resolve a CLI target: a bundled scenario id, or a path to a config file.
Scenario resolve_scenario(const std::string& id_or_path);

}  // namespace huntil
