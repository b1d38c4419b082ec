#include "memscope/env/minigrid.hpp"

#include "memscope/error.hpp"

namespace memscope::env {

namespace {

constexpr int kWidth = 3;
constexpr int kCorridorX = 1;

constexpr std::array<int, 2> forward_vec(Heading h) {
  switch (h) {
    case Heading::North: return {0, 1};
    case Heading::East: return {1, 0};
    case Heading::South: return {0, -1};
    case Heading::West: return {-1, 0};
  }
  return {0, 0};
}

constexpr Heading rotate(Heading h, int quarter_turns) {
  return static_cast<Heading>(((static_cast<int>(h) + quarter_turns) % 4 + 4) % 4);
}

bool is_object(CellCode c) { return c == CellCode::Key || c == CellCode::Ball || c == CellCode::Box; }

}  // namespace

std::string_view to_string(CellCode c) noexcept {
  switch (c) {
    case CellCode::Floor: return "floor";
    case CellCode::Wall: return "wall";
    case CellCode::Key: return "key";
    case CellCode::Ball: return "ball";
    case CellCode::Box: return "box";
  }
  return "?";
}

std::optional<CellCode> parse_object(std::string_view name) noexcept {
  if (name == "key") return CellCode::Key;
  if (name == "ball") return CellCode::Ball;
  if (name == "box") return CellCode::Box;
  return std::nullopt;
}

void MinigridConfig::validate() const {
  if (map_size < 7 || map_size % 2 == 0) {
    throw ConfigError("minigrid map size L must be odd and >= 7");
  }
  if (view_size != kViewSize) throw ConfigError("minigrid view size is fixed at 3");
  if (time_limit < 1) throw ConfigError("minigrid time limit must be positive");
  if (object_pair[0] == object_pair[1] || !is_object(object_pair[0]) ||
      !is_object(object_pair[1])) {
    throw ConfigError("minigrid object pair must hold two distinct objects");
  }
}

Observation GridObservation::tokens() const {
  Observation out;
  out.reserve(10);
  out.push_back(static_cast<std::int32_t>(heading));
  for (int f = 2; f >= 0; --f) {
    for (int l = 0; l < 3; ++l) out.push_back(static_cast<std::int32_t>(cells[f][l]));
  }
  return out;
}

GridObservation GridObservation::from_tokens(std::span<const std::int32_t> tokens) {
  if (tokens.size() != 10) throw ConfigError("grid observation has 10 tokens");
  GridObservation o;
  o.heading = static_cast<Heading>(tokens[0]);
  std::size_t i = 1;
  for (int f = 2; f >= 0; --f) {
    for (int l = 0; l < 3; ++l) o.cells[f][l] = static_cast<CellCode>(tokens[i++]);
  }
  return o;
}

core::HorizonProfile minigrid_horizon_profile(const MinigridConfig& config) {
  config.validate();
  const std::int64_t top = config.map_size + 1;
  if (config.corridor_mode == CorridorMode::Fixed) return core::HorizonProfile{top};
  return core::HorizonProfile::range(MinigridConfig::kMinVariableHorizon, top);
}

MinigridMemory::MinigridMemory(MinigridConfig config) : config_(config) { config_.validate(); }

std::vector<std::string> MinigridMemory::action_names() const {
  return {"turn_left", "turn_right", "forward"};
}

core::HorizonProfile MinigridMemory::horizon_profile() const {
  return minigrid_horizon_profile(config_);
}

core::EventRecallPair MinigridMemory::episode_pair() const {
  // Two turns to face north, L-s-2 forward moves, then the junction turn.
  return {{0, 0}, {config_.map_size - base_}};
}

std::optional<ClueChannel> MinigridMemory::clue_channel() const {
  // The clue is the first object straight ahead of the agent.
  return ClueChannel{[](std::span<const std::int32_t> o) -> std::int32_t {
                       if (o.size() != 10) return 0;
                       // tokens: heading, row f=2 (3), row f=1 (3), row f=0 (3)
                       for (std::size_t idx : {std::size_t{5}, std::size_t{2}}) {
                         if (is_object(static_cast<CellCode>(o[idx]))) return o[idx];
                       }
                       return 0;
                     },
                     "object straight ahead in the view"};
}

double MinigridMemory::success_reward(int t) const noexcept {
  return 1.0 - 0.9 * static_cast<double>(t) / static_cast<double>(config_.time_limit);
}

CellCode MinigridMemory::cell(int x, int y) const noexcept {
  const int junction = config_.map_size;
  if (x < 0 || x >= kWidth || y < 0 || y > junction) return CellCode::Wall;
  if (y == junction) return x == kCorridorX ? CellCode::Floor : arms_[x == 0 ? 0 : 1];
  if (x != kCorridorX || y < base_) return CellCode::Wall;
  if (y == base_) return clue_;
  return CellCode::Floor;
}

GridObservation MinigridMemory::observe() const {
  GridObservation o;
  o.heading = heading_;
  const auto fwd = forward_vec(heading_);
  const auto left = forward_vec(rotate(heading_, -1));
  for (int f = 0; f < 3; ++f) {
    for (int l = 0; l < 3; ++l) {
      const int lateral = 1 - l;  // l = 0 is one step to the left
      const int cx = x_ + f * fwd[0] + lateral * left[0];
      const int cy = y_ + f * fwd[1] + lateral * left[1];
      o.cells[f][l] = (f == 0 && l == 1) ? CellCode::Floor : cell(cx, cy);
    }
  }
  return o;
}

Observation MinigridMemory::reset(std::uint64_t seed) {
  rng_.reseed(seed);
  const int pick = static_cast<int>(rng_.uniform_below(2));
  clue_ = config_.object_pair[pick];
  const bool swap = rng_.uniform_below(2) == 1;
  arms_ = swap ? std::array{config_.object_pair[1], config_.object_pair[0]}
               : config_.object_pair;
  base_ = config_.corridor_mode == CorridorMode::Fixed
              ? 0
              : static_cast<int>(rng_.uniform_int(
                    0, config_.map_size - MinigridConfig::kMinVariableHorizon + 1));
  x_ = kCorridorX;
  y_ = base_ + 2;
  heading_ = Heading::South;
  t_ = 0;
  done_ = false;
  return observe().tokens();
}

StepResult MinigridMemory::step(int action) {
  if (done_) throw Error("minigrid: step called after the episode ended");
  if (action < 0 || action >= action_count()) throw ConfigError("minigrid: invalid action");
  ++t_;

  StepResult out;
  switch (static_cast<GridAction>(action)) {
    case GridAction::TurnLeft: heading_ = rotate(heading_, -1); break;
    case GridAction::TurnRight: heading_ = rotate(heading_, 1); break;
    case GridAction::Forward: {
      const auto fwd = forward_vec(heading_);
      const int nx = x_ + fwd[0];
      const int ny = y_ + fwd[1];
      const CellCode target = cell(nx, ny);
      const bool arm = ny == config_.map_size && nx != kCorridorX && is_object(target);
      if (arm) {
        x_ = nx;
        y_ = ny;
        done_ = true;
        out.success = target == clue_;
        out.reward = out.success ? success_reward(t_) : 0.0;
      } else if (target == CellCode::Floor) {
        x_ = nx;
        y_ = ny;
      }
      break;
    }
  }

  if (!done_ && t_ >= config_.time_limit) done_ = true;
  out.done = done_;
  out.observation = observe().tokens();
  return out;
}

}  // namespace memscope::env
