#include "memscope/env/tmaze.hpp"

#include "memscope/error.hpp"

namespace memscope::env {

void TMazeConfig::validate() const {
  if (corridor_length < 2) throw ConfigError("tmaze corridor length L must be >= 2");
}

TMazeObservation TMazeObservation::from_tokens(std::span<const std::int32_t> tokens) {
  if (tokens.size() != 4) throw ConfigError("tmaze observation has 4 channels");
  return {tokens[0], tokens[1], tokens[2], tokens[3]};
}

core::HorizonProfile tmaze_horizon_profile(const TMazeConfig& config) {
  config.validate();
  const std::int64_t t = config.episode_length();
  const core::EventRecallPair pair{{0, 0}, {t - 1}};
  return core::HorizonProfile::from_pairs(std::span(&pair, 1));
}

TMaze::TMaze(TMazeConfig config) : config_(config) { config_.validate(); }

std::vector<std::string> TMaze::action_names() const {
  return {"right", "up", "left", "down"};
}

core::HorizonProfile TMaze::horizon_profile() const { return tmaze_horizon_profile(config_); }

core::EventRecallPair TMaze::episode_pair() const {
  return {{0, 0}, {config_.episode_length() - 1}};
}

std::optional<ClueChannel> TMaze::clue_channel() const {
  return ClueChannel{[](std::span<const std::int32_t> o) { return o.size() > 1 ? o[1] : 0; },
                     "clue channel (index 1)"};
}

double TMaze::step_penalty() const noexcept {
  return -1.0 / static_cast<double>(config_.episode_length() - 1);
}

TMazeObservation TMaze::observe(bool flag, std::int32_t y, std::int32_t clue) {
  TMazeObservation o;
  o.y = y;
  o.clue = clue;
  o.flag = flag ? 1 : 0;
  o.noise = config_.noise_enabled ? static_cast<std::int32_t>(rng_.uniform_int(-1, 1)) : 0;
  last_ = o;
  return o;
}

Observation TMaze::reset(std::uint64_t seed) {
  rng_.reseed(seed);
  clue_ = rng_.uniform_below(2) == 0 ? 1 : -1;
  x_ = 0;
  t_ = 0;
  done_ = false;
  return observe(false, 0, clue_).tokens();
}

StepResult TMaze::step(int action) {
  if (done_) throw Error("tmaze: step called after the episode ended");
  if (action < 0 || action >= action_count()) throw ConfigError("tmaze: invalid action");

  const int length = config_.corridor_length;
  const auto a = static_cast<TMazeAction>(action);
  ++t_;

  StepResult out;
  if (config_.reward_mode == RewardMode::Dense) out.reward += step_penalty();

  std::int32_t y = 0;
  bool flag = false;
  if (x_ < length) {
    if (a == TMazeAction::Right) {
      ++x_;
      flag = x_ == length - 1;
    }
  } else if (a == TMazeAction::Up || a == TMazeAction::Down) {
    y = a == TMazeAction::Up ? 1 : -1;
    done_ = true;
    out.success = y == clue_;
    if (out.success) out.reward += 1.0;
  }

  if (!done_ && t_ >= config_.episode_length()) done_ = true;
  out.done = done_;
  out.observation = observe(flag, y, 0).tokens();
  return out;
}

}  // namespace memscope::env
