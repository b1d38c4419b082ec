#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "memscope/agents/agent.hpp"
#include "memscope/core/context.hpp"
#include "memscope/core/planning.hpp"
#include "memscope/env/registry.hpp"

namespace memscope::harness {

enum class AgentKind { Window, Random };
enum class MechanismKind { None, Latch, FullHistory };

std::string_view to_string(MechanismKind m) noexcept;
std::optional<MechanismKind> parse_mechanism(std::string_view s) noexcept;

struct AgentConfig {
  AgentKind kind = AgentKind::Window;
  std::int64_t k = 1;
  MechanismKind mechanism = MechanismKind::None;
  double learning_rate = 0.1;
  // Defaults by environment: 0.99 for minigrid, 1.0 otherwise.
  std::optional<double> gamma;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // Fraction of the training budget over which epsilon decays linearly.
  double epsilon_decay_fraction = 0.5;
};

double default_gamma(const env::EnvConfig& env);

// K and K_eff an agent built from `agent` would declare in `env`.
core::ContextSpec declared_context(const AgentConfig& agent, const env::EnvConfig& env);

std::unique_ptr<agents::Agent> make_agent(const AgentConfig& config,
                                          const env::Environment& environment,
                                          const env::EnvConfig& env_config, std::uint64_t seed);

struct ExperimentConfig {
  std::string config_id = "experiment";
  env::EnvConfig env = env::TMazeConfig{};
  AgentConfig agent;
  core::MemoryTarget claim = core::MemoryTarget::Stm;
  std::int64_t train_episodes = 0;
  // Episodes between evaluations; 0 selects 5% of the budget.
  std::int64_t eval_every = 0;
  int runs = 3;
  std::vector<std::uint64_t> eval_seeds = default_eval_seeds();
  std::uint64_t base_seed = 0;
  // Run even when validation rejects the design (Mixed band or an LTM claim
  // the agent cannot support). The stamp records the override.
  bool allow_mixed = false;
  bool save_qtables = false;

  std::int64_t effective_eval_every() const noexcept;
  static std::vector<std::uint64_t> default_eval_seeds();
};

// Throws ConfigError on malformed input.
ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

// A file holds one experiment object or {"experiments": [...]}.
std::vector<ExperimentConfig> load_experiments(const std::filesystem::path& path);

// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// Classification attached to a validated config and every record it yields.
struct ClassificationStamp {
  core::MemoryTaskClass task_class;
  std::int64_t k;
  std::int64_t k_eff;
  std::int64_t xi_min;
  std::int64_t xi_max;
  std::int64_t k_bar;
  bool overridden = false;
  std::string note;

  friend bool operator==(const ClassificationStamp&, const ClassificationStamp&) = default;
};

class StampedConfig {
 public:
  const ExperimentConfig& config() const noexcept { return config_; }
  const ClassificationStamp& stamp() const noexcept { return stamp_; }

 private:
  friend StampedConfig validate_config(const ExperimentConfig& config);
  StampedConfig(ExperimentConfig c, ClassificationStamp s)
      : config_(std::move(c)), stamp_(std::move(s)) {}

  ExperimentConfig config_;
  ClassificationStamp stamp_;
};

// Checks the claimed memory type against the (K, K_eff, Xi) geometry:
//   LTM claims need K <= K_bar plus a mechanism with max Xi <= K_eff;
//   STM claims need K >= max Xi; Mixed designs are rejected.
// Throws ValidationError (rule + corrective interval) unless allow_mixed is
// set, and ConfigError/NotMemoryIntensive for unusable configs.
StampedConfig validate_config(const ExperimentConfig& config);

}  // namespace memscope::harness
