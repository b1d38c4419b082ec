#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "memscope/env/corridor_mdp.hpp"
#include "memscope/env/minigrid.hpp"
#include "memscope/env/tmaze.hpp"

namespace memscope::env {

using EnvConfig = std::variant<TMazeConfig, MinigridConfig, CorridorConfig>;

// Compact spec grammar: name[:item[,item...]] where item is key=value or a
// bare flag. Examples: "tmaze:L=10", "tmaze:L=10,dense,noise",
// "minigrid:L=21,variable", "minigrid:L=9,mode=fixed,time_limit=60",
// "corridor:L=5". Throws ConfigError on unknown names, keys or values.
EnvConfig parse_env_spec(std::string_view spec);
std::string to_spec(const EnvConfig& config);

// JSON form: {"name": "tmaze", "corridor_length": 10, ...}. A JSON string is
// accepted as a compact spec.
EnvConfig env_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnvConfig& config);

std::string env_name(const EnvConfig& config);
std::unique_ptr<Environment> make_environment(const EnvConfig& config);
core::HorizonProfile horizon_profile(const EnvConfig& config);
int episode_bound(const EnvConfig& config);

struct RegisteredEnv {
  std::string name;
  std::string description;
  std::string example_spec;
};

const std::vector<RegisteredEnv>& registered_environments();

}  // namespace memscope::env
