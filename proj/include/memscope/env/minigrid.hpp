#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "memscope/env/environment.hpp"
#include "memscope/util/rng.hpp"

namespace memscope::env {

enum class CorridorMode { Fixed, Variable };

// Cell codes of the egocentric view.
enum class CellCode : std::int32_t { Floor = 1, Wall = 2, Key = 4, Ball = 5, Box = 6 };

std::string_view to_string(CellCode c) noexcept;
std::optional<CellCode> parse_object(std::string_view name) noexcept;

enum class Heading : std::int32_t { North = 0, East = 1, South = 2, West = 3 };

enum class GridAction : int { TurnLeft = 0, TurnRight = 1, Forward = 2 };

struct MinigridConfig {
  static constexpr int kViewSize = 3;
  static constexpr int kDefaultTimeLimit = 95;
  // Shortest horizon produced in variable mode.
  static constexpr int kMinVariableHorizon = 7;

  int map_size = 21;  // L: odd, >= 7
  CorridorMode corridor_mode = CorridorMode::Fixed;
  int view_size = kViewSize;
  int time_limit = kDefaultTimeLimit;
  std::array<CellCode, 2> object_pair{CellCode::Key, CellCode::Ball};

  void validate() const;

  friend bool operator==(const MinigridConfig&, const MinigridConfig&) = default;
};

// 3x3 egocentric crop: the agent sits at the bottom centre facing "up".
// cells[f][l]: f = forward distance 0..2, l = 0 left, 1 centre, 2 right.
struct GridObservation {
  Heading heading = Heading::North;
  std::array<std::array<CellCode, 3>, 3> cells{};

  // [heading, cells[2][0..2], cells[1][0..2], cells[0][0..2]]
  Observation tokens() const;
  static GridObservation from_tokens(std::span<const std::int32_t> tokens);

  friend bool operator==(const GridObservation&, const GridObservation&) = default;
};

// fixed -> {L + 1}; variable -> {7, ..., L + 1}.
core::HorizonProfile minigrid_horizon_profile(const MinigridConfig& config);

// T-shaped memory maze on a 3-column grid with rows y = 0..L. Column 1 is
// the corridor; the junction is its top cell (y = L) with one object on each
// side arm. The clue object sits at the corridor's base y = s and blocks
// movement. The agent starts at y = s + 2 facing the clue, which it sees two
// cells ahead at t = 0 and cannot see again once it turns (s = 0 in fixed
// mode, uniform in [0, L-6] in variable mode). The junction turn happens at
// t = L - s, so xi = L + 1 - s.
class MinigridMemory final : public Environment {
 public:
  explicit MinigridMemory(MinigridConfig config);

  std::string name() const override { return "minigrid"; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  int action_count() const override { return 3; }
  std::vector<std::string> action_names() const override;
  core::HorizonProfile horizon_profile() const override;
  core::EventRecallPair episode_pair() const override;
  int episode_bound() const override { return config_.time_limit; }
  std::optional<ClueChannel> clue_channel() const override;
  int elapsed() const override { return t_; }
  bool done() const override { return done_; }

  const MinigridConfig& config() const noexcept { return config_; }
  CellCode clue_object() const noexcept { return clue_; }
  // Object on the west (index 0) and east (index 1) arm.
  std::array<CellCode, 2> arm_objects() const noexcept { return arms_; }
  int corridor_base() const noexcept { return base_; }
  int x() const noexcept { return x_; }
  int y() const noexcept { return y_; }
  Heading heading() const noexcept { return heading_; }
  GridObservation observe() const;

  // Terminal reward for success after t steps: 1 - 0.9 * t / T.
  double success_reward(int t) const noexcept;

 private:
  CellCode cell(int x, int y) const noexcept;

  MinigridConfig config_;
  util::Rng rng_;
  int base_ = 0;
  int x_ = 1;
  int y_ = 1;
  Heading heading_ = Heading::South;
  int t_ = 0;
  bool done_ = true;
  CellCode clue_ = CellCode::Key;
  std::array<CellCode, 2> arms_{CellCode::Key, CellCode::Ball};
};

}  // namespace memscope::env
