#include "memscope/harness/experiment.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "memscope/agents/window_agent.hpp"
#include "memscope/error.hpp"

namespace memscope::harness {

std::string_view to_string(MechanismKind m) noexcept {
  switch (m) {
    case MechanismKind::None: return "none";
    case MechanismKind::Latch: return "latch";
    case MechanismKind::FullHistory: return "full_history";
  }
  return "?";
}

std::optional<MechanismKind> parse_mechanism(std::string_view s) noexcept {
  if (s == "none") return MechanismKind::None;
  if (s == "latch") return MechanismKind::Latch;
  if (s == "full_history" || s == "full-history") return MechanismKind::FullHistory;
  return std::nullopt;
}

double default_gamma(const env::EnvConfig& env) {
  return std::holds_alternative<env::MinigridConfig>(env) ? 0.99 : 1.0;
}

core::ContextSpec declared_context(const AgentConfig& agent, const env::EnvConfig& env) {
  if (agent.kind == AgentKind::Random) return core::ContextSpec(1);
  if (agent.mechanism == MechanismKind::None) return core::ContextSpec(agent.k);
  return core::ContextSpec(agent.k, std::max<std::int64_t>(agent.k, env::episode_bound(env)));
}

std::unique_ptr<agents::Agent> make_agent(const AgentConfig& config,
                                          const env::Environment& environment,
                                          const env::EnvConfig& env_config, std::uint64_t seed) {
  if (config.kind == AgentKind::Random) {
    return agents::random_agent(environment.action_count(), seed);
  }
  auto agent = std::make_unique<agents::WindowQAgent>(agents::WindowAgentParams{
      .k = config.k,
      .num_actions = environment.action_count(),
      .q = {.learning_rate = config.learning_rate,
            .gamma = config.gamma.value_or(default_gamma(env_config))},
      .seed = seed});
  switch (config.mechanism) {
    case MechanismKind::None: break;
    case MechanismKind::Latch:
      agent = agents::latch_mechanism(std::move(agent),
                                      agents::LatchConfig::for_environment(environment));
      break;
    case MechanismKind::FullHistory:
      agent = agents::full_history_mechanism(std::move(agent), environment.episode_bound());
      break;
  }
  return agent;
}

std::int64_t ExperimentConfig::effective_eval_every() const noexcept {
  if (eval_every > 0) return eval_every;
  return std::max<std::int64_t>(1, (train_episodes + 10) / 20);
}

std::vector<std::uint64_t> ExperimentConfig::default_eval_seeds() {
  std::vector<std::uint64_t> seeds(100);
  for (std::uint64_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

namespace {

AgentConfig agent_from_json(const nlohmann::json& j) {
  AgentConfig a;
  const auto kind = j.value("kind", std::string("window"));
  if (kind == "window") a.kind = AgentKind::Window;
  else if (kind == "random") a.kind = AgentKind::Random;
  else throw ConfigError("agent kind must be 'window' or 'random'");
  a.k = j.value("k", a.k);
  const auto mech = j.value("mechanism", std::string("none"));
  const auto parsed = parse_mechanism(mech);
  if (!parsed) throw ConfigError("unknown mechanism '" + mech + "'");
  a.mechanism = *parsed;
  a.learning_rate = j.value("learning_rate", a.learning_rate);
  if (j.contains("gamma") && !j.at("gamma").is_null()) a.gamma = j.at("gamma").get<double>();
  a.epsilon_start = j.value("epsilon_start", a.epsilon_start);
  a.epsilon_end = j.value("epsilon_end", a.epsilon_end);
  a.epsilon_decay_fraction = j.value("epsilon_decay_fraction", a.epsilon_decay_fraction);
  if (a.k < 1) throw ConfigError("agent k must be >= 1");
  if (a.kind == AgentKind::Random && (a.k != 1 || a.mechanism != MechanismKind::None)) {
    throw ConfigError("random agent has K = 1 and no mechanism");
  }
  if (a.learning_rate < 0.0 || a.learning_rate > 1.0) {
    throw ConfigError("learning_rate must lie in [0, 1]");
  }
  if (a.gamma && (*a.gamma < 0.0 || *a.gamma > 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (a.epsilon_decay_fraction < 0.0 || a.epsilon_decay_fraction > 1.0) {
    throw ConfigError("epsilon_decay_fraction must lie in [0, 1]");
  }
  return a;
}

nlohmann::json agent_to_json(const AgentConfig& a) {
  nlohmann::json j{{"kind", a.kind == AgentKind::Window ? "window" : "random"},
                   {"k", a.k},
                   {"mechanism", std::string(to_string(a.mechanism))},
                   {"learning_rate", a.learning_rate},
                   {"epsilon_start", a.epsilon_start},
                   {"epsilon_end", a.epsilon_end},
                   {"epsilon_decay_fraction", a.epsilon_decay_fraction}};
  j["gamma"] = a.gamma ? nlohmann::json(*a.gamma) : nlohmann::json(nullptr);
  return j;
}

std::vector<std::uint64_t> seeds_from_json(const nlohmann::json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_array()) {
    seeds = j.get<std::vector<std::uint64_t>>();
  } else if (j.is_object()) {
    const auto from = j.at("from").get<std::uint64_t>();
    const auto to = j.at("to").get<std::uint64_t>();
    if (to < from) throw ConfigError("eval_seeds range is empty");
    for (auto s = from; s <= to; ++s) seeds.push_back(s);
  } else {
    throw ConfigError("eval_seeds must be a list or {\"from\", \"to\"}");
  }
  if (seeds.empty()) throw ConfigError("eval_seeds must be non-empty");
  return seeds;
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

}  // namespace

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  try {
    ExperimentConfig c;
    c.config_id = j.value("config_id", c.config_id);
    if (!valid_id(c.config_id)) {
      throw ConfigError("config_id may only contain letters, digits, '_', '-' and '.'");
    }
    if (!j.contains("env")) throw ConfigError("experiment config needs 'env'");
    c.env = env::env_config_from_json(j.at("env"));
    if (j.contains("agent")) c.agent = agent_from_json(j.at("agent"));
    const auto claim = j.value("claim", std::string("stm"));
    const auto target = core::parse_memory_target(claim);
    if (!target) throw ConfigError("claim must be 'ltm' or 'stm'");
    c.claim = *target;
    c.train_episodes = j.value("train_episodes", c.train_episodes);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.runs = j.value("runs", c.runs);
    if (j.contains("eval_seeds")) c.eval_seeds = seeds_from_json(j.at("eval_seeds"));
    c.base_seed = j.value("base_seed", c.base_seed);
    c.allow_mixed = j.value("allow_mixed", c.allow_mixed);
    c.save_qtables = j.value("save_qtables", c.save_qtables);
    if (c.train_episodes < 0) throw ConfigError("train_episodes must be >= 0");
    if (c.eval_every < 0) throw ConfigError("eval_every must be >= 0");
    if (c.runs < 1) throw ConfigError("runs must be >= 1");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"config_id", c.config_id},
          {"env", env::to_json(c.env)},
          {"agent", agent_to_json(c.agent)},
          {"claim", std::string(core::to_string(c.claim))},
          {"train_episodes", c.train_episodes},
          {"eval_every", c.eval_every},
          {"runs", c.runs},
          {"eval_seeds", c.eval_seeds},
          {"base_seed", c.base_seed},
          {"allow_mixed", c.allow_mixed},
          {"save_qtables", c.save_qtables}};
}

std::vector<ExperimentConfig> load_experiments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open experiment config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("experiment config " + path.string() + ": " + e.what());
  }
  std::vector<ExperimentConfig> out;
  if (j.is_object() && j.contains("experiments")) {
    for (const auto& e : j.at("experiments")) out.push_back(experiment_from_json(e));
    if (out.empty()) throw ConfigError("experiment list is empty");
  } else {
    out.push_back(experiment_from_json(j));
  }
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  const auto text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

StampedConfig validate_config(const ExperimentConfig& config) {
  const auto profile = env::horizon_profile(config.env);
  if (!core::is_memory_intensive(profile)) {
    throw ValidationError("environment " + env::to_spec(config.env) + " with Xi = " +
                              profile.to_string() +
                              " is not memory-intensive (max xi = 1 means an MDP)",
                          "choose an environment whose event-recall pairs have xi > 1");
  }
  const auto context = declared_context(config.agent, config.env);
  const auto task_class = core::classify_context(context.k(), profile);
  const auto k_bar = core::context_memory_border(profile);
  const bool has_mechanism =
      config.agent.kind == AgentKind::Window && config.agent.mechanism != MechanismKind::None;

  ClassificationStamp stamp{.task_class = task_class,
                            .k = context.k(),
                            .k_eff = context.k_eff(),
                            .xi_min = profile.min(),
                            .xi_max = profile.max(),
                            .k_bar = k_bar,
                            .overridden = false,
                            .note = {}};

  std::optional<ValidationError> rejection;
  std::ostringstream where;
  where << "K=" << context.k() << ", K_eff=" << context.k_eff() << ", Xi=" << profile.to_string()
        << ", K_bar=" << k_bar;

  if (config.claim == core::MemoryTarget::Ltm) {
    const auto fix = "use K in [1, " + std::to_string(k_bar) +
                     "] with a memory mechanism giving K_eff >= " +
                     std::to_string(profile.max());
    if (task_class == core::MemoryTaskClass::Mixed) {
      rejection.emplace("LTM claim rejected: the design is Mixed (" + where.str() +
                            "); some horizons fall inside the context so LTM cannot be isolated",
                        fix);
    } else if (task_class == core::MemoryTaskClass::StmOnly) {
      rejection.emplace("LTM claim rejected: K > K_bar, every horizon fits in the context (" +
                            where.str() + ")",
                        fix);
    } else if (!has_mechanism) {
      rejection.emplace("LTM untestable without memory mechanism (" + where.str() + ")", fix);
    } else {
      const auto verdict = core::validate_mechanism_experiment(context, profile);
      if (!verdict.valid) {
        rejection.emplace("LTM claim rejected: mechanism condition fails: " + verdict.reason, fix);
      }
    }
  } else if (task_class != core::MemoryTaskClass::StmOnly) {
    const auto plan = core::plan_experiment(profile, core::MemoryTarget::Stm, false);
    std::string rule = task_class == core::MemoryTaskClass::Mixed
                           ? "STM claim rejected: the design is Mixed (" + where.str() + ")"
                           : "STM claim rejected: K <= K_bar, no horizon fits in the context (" +
                                 where.str() + ")";
    rejection.emplace(std::move(rule), "use K in " + plan.k_interval());
  }

  if (rejection) {
    if (!config.allow_mixed) throw *rejection;
    stamp.overridden = true;
    stamp.note = rejection->what();
  }
  return StampedConfig(config, std::move(stamp));
}

}  // namespace memscope::harness
