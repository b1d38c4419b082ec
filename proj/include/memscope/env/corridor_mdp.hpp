#pragma once

#include "memscope/env/environment.hpp"

namespace memscope::env {

struct CorridorConfig {
  int length = 5;
  void validate() const;
  friend bool operator==(const CorridorConfig&, const CorridorConfig&) = default;
};

// Fully observed corridor: the observation is the position, reward 1 at the
// far end. Every decision depends only on the current observation, so
// Xi = {1}. Serves as the MDP control case.
class CorridorMdp final : public Environment {
 public:
  explicit CorridorMdp(CorridorConfig config = {});

  std::string name() const override { return "corridor"; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int action_count() const override { return 2; }
  std::vector<std::string> action_names() const override { return {"right", "left"}; }
  core::HorizonProfile horizon_profile() const override { return core::HorizonProfile{1}; }
  core::EventRecallPair episode_pair() const override;
  int episode_bound() const override { return 2 * config_.length; }
  int elapsed() const override { return t_; }
  bool done() const override { return done_; }

 private:
  CorridorConfig config_;
  int x_ = 0;
  int t_ = 0;
  bool done_ = true;
};

// The MDP control environment with default settings.
std::unique_ptr<Environment> mdp_control_env();

}  // namespace memscope::env
