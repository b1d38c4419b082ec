#pragma once

#include <string>

#include "memscope/core/context.hpp"
#include "memscope/env/environment.hpp"

namespace memscope::agents {

struct Feedback {
  double reward = 0.0;
  const env::Observation& next_observation;
  bool done = false;
};

// Protocol per episode: begin_episode(), then alternate act(o_t) and
// learn({r_t, o_{t+1}, done}) until done.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual void begin_episode() = 0;
  virtual int act(const env::Observation& observation) = 0;
  virtual void learn(const Feedback& feedback) = 0;

  // K and the effective context K_eff (its declared horizon capability).
  virtual core::ContextSpec context() const = 0;
  virtual std::string describe() const = 0;

  virtual void set_exploration(double /*epsilon*/) {}
  // When disabled, learn() tracks history but never touches values.
  virtual void set_learning(bool /*enabled*/) {}
};

// Linear decay from `start` to `end` over `decay_episodes`, then flat.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  std::int64_t decay_episodes = 0;

  double at(std::int64_t episode) const noexcept;
};

}  // namespace memscope::agents
