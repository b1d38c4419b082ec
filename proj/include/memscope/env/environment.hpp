#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memscope/core/horizon.hpp"

namespace memscope::env {

// Discrete observation as a flat token vector. Concrete environments offer
// typed views (TMazeObservation, GridObservation) that encode into this.
using Observation = std::vector<std::int32_t>;

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  // Set on the terminal step of a solved episode.
  bool success = false;
};

// Reads the cue an environment hides in its observations. Returns 0 when the
// observation carries no cue.
struct ClueChannel {
  std::function<std::int32_t(std::span<const std::int32_t>)> read;
  std::string description;
};

// A seedable POMDP. Episodes are pure functions of (config, seed, actions).
// One owner per instance; instances share no state.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;

  virtual Observation reset(std::uint64_t seed) = 0;
  // Throws memscope::Error when called after the episode ended or with an
  // action outside [0, action_count()).
  virtual StepResult step(int action) = 0;

  virtual int action_count() const = 0;
  virtual std::vector<std::string> action_names() const = 0;

  // Distribution-level horizon multiset over every reachable episode.
  virtual core::HorizonProfile horizon_profile() const = 0;
  // The canonical event-recall pair of the current episode.
  virtual core::EventRecallPair episode_pair() const = 0;
  // Upper bound T on episode length in steps.
  virtual int episode_bound() const = 0;

  virtual std::optional<ClueChannel> clue_channel() const { return std::nullopt; }

  // Steps taken in the current episode.
  virtual int elapsed() const = 0;
  virtual bool done() const = 0;
};

}  // namespace memscope::env
