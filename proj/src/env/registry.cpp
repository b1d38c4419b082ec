#include "memscope/env/registry.hpp"

#include <charconv>
#include <sstream>

#include "memscope/error.hpp"

namespace memscope::env {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("env spec: '" + std::string(key) + "' expects an integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw ConfigError("env spec: '" + std::string(key) + "' expects a boolean");
}

RewardMode parse_reward_mode(std::string_view value) {
  if (value == "sparse") return RewardMode::Sparse;
  if (value == "dense") return RewardMode::Dense;
  throw ConfigError("tmaze reward mode must be sparse or dense");
}

CorridorMode parse_corridor_mode(std::string_view value) {
  if (value == "fixed") return CorridorMode::Fixed;
  if (value == "variable") return CorridorMode::Variable;
  throw ConfigError("minigrid corridor mode must be fixed or variable");
}

CellCode parse_object_or_throw(std::string_view name) {
  if (auto c = parse_object(name)) return *c;
  throw ConfigError("unknown minigrid object '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, std::string>> split_items(std::string_view body) {
  std::vector<std::pair<std::string, std::string>> items;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = body.substr(0, comma);
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      items.emplace_back(std::string(item), "");
    } else {
      items.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    }
  }
  return items;
}

[[noreturn]] void unknown_key(std::string_view env, std::string_view key) {
  throw ConfigError("env spec: unknown key '" + std::string(key) + "' for " + std::string(env));
}

}  // namespace

EnvConfig parse_env_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  const auto items =
      split_items(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1));

  if (name == "tmaze") {
    TMazeConfig c;
    for (const auto& [k, v] : items) {
      if (k == "L" || k == "length") c.corridor_length = parse_int(k, v);
      else if ((k == "sparse" || k == "dense") && v.empty()) c.reward_mode = parse_reward_mode(k);
      else if (k == "reward") c.reward_mode = parse_reward_mode(v);
      else if (k == "noise") c.noise_enabled = v.empty() ? true : parse_bool(k, v);
      else unknown_key(name, k);
    }
    c.validate();
    return c;
  }
  if (name == "minigrid") {
    MinigridConfig c;
    for (const auto& [k, v] : items) {
      if (k == "L" || k == "size") c.map_size = parse_int(k, v);
      else if ((k == "fixed" || k == "variable") && v.empty()) c.corridor_mode = parse_corridor_mode(k);
      else if (k == "mode") c.corridor_mode = parse_corridor_mode(v);
      else if (k == "time_limit") c.time_limit = parse_int(k, v);
      else if (k == "objects") {
        const auto slash = v.find('/');
        if (slash == std::string::npos) throw ConfigError("minigrid objects take the form a/b");
        c.object_pair = {parse_object_or_throw(std::string_view(v).substr(0, slash)),
                         parse_object_or_throw(std::string_view(v).substr(slash + 1))};
      } else unknown_key(name, k);
    }
    c.validate();
    return c;
  }
  if (name == "corridor" || name == "mdp") {
    CorridorConfig c;
    for (const auto& [k, v] : items) {
      if (k == "L" || k == "length") c.length = parse_int(k, v);
      else unknown_key(name, k);
    }
    c.validate();
    return c;
  }
  throw ConfigError("unknown environment '" + std::string(name) + "'");
}

std::string to_spec(const EnvConfig& config) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const TMazeConfig& c) {
                   out << "tmaze:L=" << c.corridor_length << ','
                       << (c.reward_mode == RewardMode::Sparse ? "sparse" : "dense");
                   if (c.noise_enabled) out << ",noise";
                 },
                 [&](const MinigridConfig& c) {
                   out << "minigrid:L=" << c.map_size << ','
                       << (c.corridor_mode == CorridorMode::Fixed ? "fixed" : "variable");
                   if (c.time_limit != MinigridConfig::kDefaultTimeLimit) {
                     out << ",time_limit=" << c.time_limit;
                   }
                   if (c.object_pair != MinigridConfig{}.object_pair) {
                     out << ",objects=" << to_string(c.object_pair[0]) << '/'
                         << to_string(c.object_pair[1]);
                   }
                 },
                 [&](const CorridorConfig& c) { out << "corridor:L=" << c.length; },
             },
             config);
  return out.str();
}

EnvConfig env_config_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_env_spec(j.get<std::string>());
  if (!j.is_object() || !j.contains("name")) {
    throw ConfigError("environment config must be a spec string or an object with 'name'");
  }
  const auto name = j.at("name").get<std::string>();
  try {
    if (name == "tmaze") {
      TMazeConfig c;
      c.corridor_length = j.value("corridor_length", c.corridor_length);
      c.reward_mode = parse_reward_mode(j.value("reward_mode", std::string("sparse")));
      c.noise_enabled = j.value("noise", false);
      c.validate();
      return c;
    }
    if (name == "minigrid") {
      MinigridConfig c;
      c.map_size = j.value("map_size", c.map_size);
      c.corridor_mode = parse_corridor_mode(j.value("corridor_mode", std::string("fixed")));
      c.view_size = j.value("view_size", c.view_size);
      c.time_limit = j.value("time_limit", c.time_limit);
      if (j.contains("object_pair")) {
        const auto& p = j.at("object_pair");
        if (!p.is_array() || p.size() != 2) throw ConfigError("object_pair needs two names");
        c.object_pair = {parse_object_or_throw(p[0].get<std::string>()),
                         parse_object_or_throw(p[1].get<std::string>())};
      }
      c.validate();
      return c;
    }
    if (name == "corridor") {
      CorridorConfig c;
      c.length = j.value("length", c.length);
      c.validate();
      return c;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("environment config: ") + e.what());
  }
  throw ConfigError("unknown environment '" + name + "'");
}

nlohmann::json to_json(const EnvConfig& config) {
  return std::visit(
      overloaded{
          [](const TMazeConfig& c) {
            return nlohmann::json{
                {"name", "tmaze"},
                {"corridor_length", c.corridor_length},
                {"reward_mode", c.reward_mode == RewardMode::Sparse ? "sparse" : "dense"},
                {"noise", c.noise_enabled}};
          },
          [](const MinigridConfig& c) {
            return nlohmann::json{
                {"name", "minigrid"},
                {"map_size", c.map_size},
                {"corridor_mode", c.corridor_mode == CorridorMode::Fixed ? "fixed" : "variable"},
                {"view_size", c.view_size},
                {"time_limit", c.time_limit},
                {"object_pair",
                 {std::string(to_string(c.object_pair[0])),
                  std::string(to_string(c.object_pair[1]))}}};
          },
          [](const CorridorConfig& c) {
            return nlohmann::json{{"name", "corridor"}, {"length", c.length}};
          },
      },
      config);
}

std::string env_name(const EnvConfig& config) {
  return std::visit(overloaded{[](const TMazeConfig&) { return std::string("tmaze"); },
                               [](const MinigridConfig&) { return std::string("minigrid"); },
                               [](const CorridorConfig&) { return std::string("corridor"); }},
                    config);
}

std::unique_ptr<Environment> make_environment(const EnvConfig& config) {
  return std::visit(
      overloaded{
          [](const TMazeConfig& c) -> std::unique_ptr<Environment> {
            return std::make_unique<TMaze>(c);
          },
          [](const MinigridConfig& c) -> std::unique_ptr<Environment> {
            return std::make_unique<MinigridMemory>(c);
          },
          [](const CorridorConfig& c) -> std::unique_ptr<Environment> {
            return std::make_unique<CorridorMdp>(c);
          },
      },
      config);
}

core::HorizonProfile horizon_profile(const EnvConfig& config) {
  return std::visit(overloaded{[](const TMazeConfig& c) { return tmaze_horizon_profile(c); },
                               [](const MinigridConfig& c) { return minigrid_horizon_profile(c); },
                               [](const CorridorConfig&) { return core::HorizonProfile{1}; }},
                    config);
}

int episode_bound(const EnvConfig& config) {
  return std::visit(overloaded{[](const TMazeConfig& c) { return c.episode_length(); },
                               [](const MinigridConfig& c) { return c.time_limit; },
                               [](const CorridorConfig& c) { return 2 * c.length; }},
                    config);
}

const std::vector<RegisteredEnv>& registered_environments() {
  static const std::vector<RegisteredEnv> envs{
      {"tmaze", "Passive T-Maze: clue at t=0, turn at the junction after L moves",
       "tmaze:L=10"},
      {"minigrid", "Minigrid-Memory: 3x3 view, clue at the corridor base, object arms at the junction",
       "minigrid:L=21,fixed"},
      {"minigrid", "Minigrid-Memory with a variable corridor start",
       "minigrid:L=21,variable"},
      {"corridor", "Fully observed corridor (MDP control, xi = 1)", "corridor:L=5"},
  };
  return envs;
}

}  // namespace memscope::env
