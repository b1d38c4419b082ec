#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "memscope/agents/agent.hpp"
#include "memscope/agents/q_table.hpp"
#include "memscope/agents/window_key.hpp"
#include "memscope/util/rng.hpp"

namespace memscope::agents {

// State a mechanism carries across the episode beyond the context window.
// Cleared at every episode start.
class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual std::string name() const = 0;
  virtual void reset() = 0;
  virtual void on_observation(const env::Observation& observation) = 0;
  virtual void on_transition(int /*action*/, double /*reward*/) {}
  virtual void append_key_tokens(std::vector<std::int64_t>& out) const = 0;
  virtual std::int64_t effective_context(std::int64_t k) const = 0;
};

struct LatchConfig {
  env::ClueChannel clue;
  std::int64_t episode_bound = 1;  // T

  // Throws ConfigError when the environment declares no clue channel.
  static LatchConfig for_environment(const env::Environment& environment);
};

// Write-once slot holding the first non-null clue. K_eff = T.
class LatchMechanism final : public Mechanism {
 public:
  explicit LatchMechanism(LatchConfig config) : config_(std::move(config)) {}

  std::string name() const override { return "latch"; }
  void reset() override { slot_.reset(); }
  void on_observation(const env::Observation& observation) override;
  void append_key_tokens(std::vector<std::int64_t>& out) const override;
  std::int64_t effective_context(std::int64_t k) const override;

  std::optional<std::int32_t> slot() const noexcept { return slot_; }

 private:
  LatchConfig config_;
  std::optional<std::int32_t> slot_;
};

// Running digest of the entire episode history. K_eff = T.
class FullHistoryMechanism final : public Mechanism {
 public:
  explicit FullHistoryMechanism(std::int64_t episode_bound) : episode_bound_(episode_bound) {}

  std::string name() const override { return "full_history"; }
  void reset() override;
  void on_observation(const env::Observation& observation) override;
  void on_transition(int action, double reward) override;
  void append_key_tokens(std::vector<std::int64_t>& out) const override;
  std::int64_t effective_context(std::int64_t k) const override;

 private:
  void fold(std::int64_t token);

  std::int64_t episode_bound_;
  std::uint64_t h1_ = 0;
  std::uint64_t h2_ = 0;
};

struct WindowAgentParams {
  std::int64_t k = 1;
  int num_actions = 2;
  QParams q{};
  std::uint64_t seed = 0;
};

// Epsilon-greedy tabular Q-learner keyed on the last K steps.
class WindowQAgent final : public Agent {
 public:
  explicit WindowQAgent(WindowAgentParams params);

  void begin_episode() override;
  int act(const env::Observation& observation) override;
  void learn(const Feedback& feedback) override;
  core::ContextSpec context() const override;
  std::string describe() const override;
  void set_exploration(double epsilon) override { epsilon_ = epsilon; }
  void set_learning(bool enabled) override { learning_ = enabled; }

  void attach(std::unique_ptr<Mechanism> mechanism);
  const Mechanism* mechanism() const noexcept { return mechanism_.get(); }

  // Key of the window ending at `observation` given the current history.
  WindowKey current_key(const env::Observation& observation) const;
  // Canonical tokens behind current_key().
  std::vector<std::int64_t> current_tokens(const env::Observation& observation) const;

  const QTable& table() const noexcept { return table_; }
  QTable& table() noexcept { return table_; }
  const WindowAgentParams& params() const noexcept { return params_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  void enter(const env::Observation& observation);

  WindowAgentParams params_;
  QTable table_;
  util::Rng rng_;
  std::unique_ptr<Mechanism> mechanism_;
  double epsilon_ = 0.0;
  bool learning_ = true;

  std::deque<StepRecord> history_;
  env::Observation current_;
  bool has_current_ = false;
  WindowKey current_key_;
  int last_action_ = -1;
  mutable std::vector<std::int64_t> scratch_;
};

// Attach a write-once clue latch; K_eff becomes T.
std::unique_ptr<WindowQAgent> latch_mechanism(std::unique_ptr<WindowQAgent> agent,
                                              LatchConfig config);
// Attach a full-history digest; K_eff becomes T.
std::unique_ptr<WindowQAgent> full_history_mechanism(std::unique_ptr<WindowQAgent> agent,
                                                     std::int64_t episode_bound);

// Uniformly random, memoryless baseline (K = 1).
class RandomAgent final : public Agent {
 public:
  RandomAgent(int num_actions, std::uint64_t seed) : num_actions_(num_actions), rng_(seed) {}

  void begin_episode() override {}
  int act(const env::Observation&) override {
    return static_cast<int>(rng_.uniform_below(static_cast<std::uint64_t>(num_actions_)));
  }
  void learn(const Feedback&) override {}
  core::ContextSpec context() const override { return core::ContextSpec(1); }
  std::string describe() const override { return "random"; }

 private:
  int num_actions_;
  util::Rng rng_;
};

std::unique_ptr<Agent> random_agent(int num_actions, std::uint64_t seed);

}  // namespace memscope::agents
