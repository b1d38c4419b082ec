#include "memscope/env/corridor_mdp.hpp"

#include "memscope/error.hpp"

namespace memscope::env {

void CorridorConfig::validate() const {
  if (length < 1) throw ConfigError("corridor length must be >= 1");
}

CorridorMdp::CorridorMdp(CorridorConfig config) : config_(config) { config_.validate(); }

Observation CorridorMdp::reset(std::uint64_t) {
  x_ = 0;
  t_ = 0;
  done_ = false;
  return {x_};
}

StepResult CorridorMdp::step(int action) {
  if (done_) throw Error("corridor: step called after the episode ended");
  if (action < 0 || action >= action_count()) throw ConfigError("corridor: invalid action");
  ++t_;
  x_ += action == 0 ? 1 : (x_ > 0 ? -1 : 0);
  StepResult out;
  if (x_ == config_.length) {
    done_ = true;
    out.success = true;
    out.reward = 1.0;
  } else if (t_ >= episode_bound()) {
    done_ = true;
  }
  out.done = done_;
  out.observation = {x_};
  return out;
}

core::EventRecallPair CorridorMdp::episode_pair() const {
  // The decision at each step is fully determined by that step's observation.
  return {{t_, 0}, {t_}};
}

std::unique_ptr<Environment> mdp_control_env() { return std::make_unique<CorridorMdp>(); }

}  // namespace memscope::env
