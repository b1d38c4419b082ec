#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "memscope/harness/experiment.hpp"

namespace memscope::harness {

struct EvalPoint {
  std::int64_t eval_episode = 0;  // training episodes completed
  std::uint64_t seed = 0;         // evaluation environment seed
  bool success = false;
  double ret = 0.0;

  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;
};

struct RunRecord {
  std::string config_id;
  int run = 0;
  std::uint64_t seed = 0;  // run seed; agent and training streams derive from it
  ClassificationStamp stamp;
  std::vector<EvalPoint> evals;
  std::optional<std::string> error;  // set when the run aborted

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunOptions {
  int workers = 1;
  // Called once per finished run, serialized across workers.
  std::function<void(const RunRecord&)> sink;
  // Directory for per-run q-tables when the config asks for them.
  std::string qtable_dir;
};

// Seed of run `run`: all randomness of the run derives from it.
std::uint64_t run_seed(const ExperimentConfig& config, int run) noexcept;

// Evaluation schedule: 0, every, 2*every, ..., train_episodes.
std::vector<std::int64_t> evaluation_points(const ExperimentConfig& config);

// Trains `runs` fresh agents with epsilon-greedy exploration and evaluates
// the greedy policy on every eval seed at each evaluation point. Output is
// sorted by run and identical for any worker count.
std::vector<RunRecord> run_experiment(const StampedConfig& stamped, const RunOptions& options = {});

struct EpisodeOutcome {
  double ret = 0.0;
  bool success = false;
  int steps = 0;
};

// Plays one episode. Learning/exploration follow the agent's current mode.
EpisodeOutcome play_episode(env::Environment& environment, agents::Agent& agent,
                            std::uint64_t seed);

}  // namespace memscope::harness
