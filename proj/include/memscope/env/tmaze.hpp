#pragma once

#include <array>
#include <cstdint>

#include "memscope/env/environment.hpp"
#include "memscope/util/rng.hpp"

namespace memscope::env {

enum class RewardMode { Sparse, Dense };

struct TMazeConfig {
  int corridor_length = 10;  // L >= 2; the episode lasts at most T = L + 1 steps
  RewardMode reward_mode = RewardMode::Sparse;
  bool noise_enabled = false;

  int episode_length() const noexcept { return corridor_length + 1; }
  // Throws ConfigError when L < 2.
  void validate() const;

  friend bool operator==(const TMazeConfig&, const TMazeConfig&) = default;
};

// Right first: an untrained greedy learner walks the corridor.
enum class TMazeAction : int { Right = 0, Up = 1, Left = 2, Down = 3 };

struct TMazeObservation {
  std::int32_t y = 0;      // -1, 0 or 1
  std::int32_t clue = 0;   // -1 or 1 at t = 0, otherwise 0
  std::int32_t flag = 0;   // 1 on arrival one cell before the junction
  std::int32_t noise = 0;  // uniform in {-1, 0, 1} when enabled

  Observation tokens() const { return {y, clue, flag, noise}; }
  static TMazeObservation from_tokens(std::span<const std::int32_t> tokens);

  friend bool operator==(const TMazeObservation&, const TMazeObservation&) = default;
};

// Xi = {L + 1}: the clue at t = 0 is recalled at the junction turn, t = T - 1.
core::HorizonProfile tmaze_horizon_profile(const TMazeConfig& config);

// Passive T-Maze. The agent starts at x = 0 and reaches the junction at
// x = L after L right moves; an up/down turn there ends the episode.
// Moves that cannot advance are no-ops that still consume a step, so a
// single wasted step makes the junction unreachable within T.
class TMaze final : public Environment {
 public:
  explicit TMaze(TMazeConfig config);

  std::string name() const override { return "tmaze"; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int action_count() const override { return 4; }
  std::vector<std::string> action_names() const override;
  core::HorizonProfile horizon_profile() const override;
  core::EventRecallPair episode_pair() const override;
  int episode_bound() const override { return config_.episode_length(); }
  std::optional<ClueChannel> clue_channel() const override;
  int elapsed() const override { return t_; }
  bool done() const override { return done_; }

  const TMazeConfig& config() const noexcept { return config_; }
  int position() const noexcept { return x_; }
  int clue() const noexcept { return clue_; }
  TMazeObservation last_observation() const noexcept { return last_; }

  // Per-step shaping penalty in dense mode: -1 / (T - 1).
  double step_penalty() const noexcept;

 private:
  TMazeObservation observe(bool flag, std::int32_t y, std::int32_t clue);

  TMazeConfig config_;
  util::Rng rng_;
  int x_ = 0;
  int t_ = 0;
  int clue_ = 1;
  bool done_ = true;
  TMazeObservation last_;
};

}  // namespace memscope::env
