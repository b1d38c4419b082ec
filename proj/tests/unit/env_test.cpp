#include <algorithm>
#include <set>

#include "doctest.h"
#include "memscope/env/corridor_mdp.hpp"
#include "memscope/env/minigrid.hpp"
#include "memscope/env/registry.hpp"
#include "memscope/env/tmaze.hpp"
#include "memscope/error.hpp"
#include "memscope/util/rng.hpp"

using namespace memscope;
using namespace memscope::env;

namespace {

constexpr int kRight = static_cast<int>(TMazeAction::Right);
constexpr int kUp = static_cast<int>(TMazeAction::Up);
constexpr int kDown = static_cast<int>(TMazeAction::Down);
constexpr int kLeft = static_cast<int>(TMazeAction::Left);

// Walks the corridor, then turns. Returns the terminal step.
StepResult walk_and_turn(TMaze& maze, int turn) {
  for (int i = 0; i < maze.config().corridor_length; ++i) {
    auto r = maze.step(kRight);
    REQUIRE_FALSE(r.done);
  }
  return maze.step(turn);
}

bool is_object_code(std::int32_t code) { return code >= static_cast<std::int32_t>(CellCode::Key); }

}  // namespace

TEST_CASE("tmaze start observation carries the clue and nothing else") {
  TMaze maze({10});
  std::set<int> clues;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto o = TMazeObservation::from_tokens(maze.reset(seed));
    CHECK(o.y == 0);
    CHECK(o.flag == 0);
    CHECK(o.noise == 0);
    CHECK((o.clue == 1 || o.clue == -1));
    clues.insert(o.clue);
    CHECK(o.clue == maze.clue());
  }
  CHECK(clues.size() == 2);
}

TEST_CASE("tmaze corridor: clue once, flag once, junction after L rights") {
  TMaze maze({10});
  maze.reset(3);
  int flags = 0;
  for (int i = 1; i <= 10; ++i) {
    auto r = maze.step(kRight);
    const auto o = TMazeObservation::from_tokens(r.observation);
    CHECK(o.clue == 0);
    CHECK(r.reward == 0.0);
    CHECK_FALSE(r.done);
    flags += o.flag;
    CHECK(o.flag == (i == 9 ? 1 : 0));
    CHECK(maze.position() == i);
  }
  CHECK(flags == 1);
  // Right at the junction is a no-op, so the step budget runs out.
  auto r = maze.step(kRight);
  CHECK(r.done);
  CHECK_FALSE(r.success);
  CHECK(maze.elapsed() == 11);
}

TEST_CASE("tmaze turn outcome matches the clue in sparse mode") {
  TMaze maze({10});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    maze.reset(seed);
    const int good = maze.clue() == 1 ? kUp : kDown;
    const int bad = good == kUp ? kDown : kUp;
    auto win = walk_and_turn(maze, good);
    CHECK(win.done);
    CHECK(win.success);
    CHECK(win.reward == 1.0);
    CHECK(maze.elapsed() == maze.config().episode_length());

    maze.reset(seed);
    auto loss = walk_and_turn(maze, bad);
    CHECK(loss.done);
    CHECK_FALSE(loss.success);
    CHECK(loss.reward == 0.0);
  }
}

TEST_CASE("tmaze: a single wasted step forfeits the episode") {
  for (int wasted : {kUp, kLeft, kDown}) {
    TMaze maze({6});
    maze.reset(1);
    maze.step(wasted);  // no-op inside the corridor
    bool done = false;
    StepResult r;
    for (int i = 0; i < 6 && !done; ++i) {
      r = maze.step(kRight);
      done = r.done;
    }
    CHECK(done);
    CHECK_FALSE(r.success);
    CHECK(maze.position() == 6);
  }
}

TEST_CASE("tmaze dense penalty") {
  TMaze maze({10, RewardMode::Dense});
  CHECK(maze.step_penalty() == doctest::Approx(-0.1));
  maze.reset(0);
  double total = 0.0;
  for (int i = 0; i < 10; ++i) total += maze.step(kRight).reward;
  CHECK(total == doctest::Approx(-1.0));
  const int good = maze.clue() == 1 ? kUp : kDown;
  total += maze.step(good).reward;
  CHECK(total == doctest::Approx(1.0 - 1.1));
}

TEST_CASE("tmaze rejects misuse") {
  CHECK_THROWS_AS(TMaze({1}), ConfigError);
  TMaze maze({4});
  maze.reset(0);
  CHECK_THROWS_AS(maze.step(4), ConfigError);
  CHECK_THROWS_AS(maze.step(-1), ConfigError);
  walk_and_turn(maze, kUp);
  CHECK_THROWS_AS(maze.step(kRight), Error);
}

TEST_CASE("tmaze horizon is L + 1") {
  for (int length : {2, 5, 10, 21}) {
    TMaze maze({length});
    CHECK(maze.horizon_profile() == core::HorizonProfile{length + 1});
    maze.reset(0);
    CHECK(core::correlation_horizon(maze.episode_pair()) == length + 1);
  }
}

TEST_CASE("tmaze clue-blind turning averages exactly one half") {
  // Both clues, both turns; each combination equally likely.
  TMaze maze({10});
  double sum = 0.0;
  int cases = 0;
  for (int clue : {1, -1}) {
    std::uint64_t seed = 0;
    while (true) {
      maze.reset(seed);
      if (maze.clue() == clue) break;
      ++seed;
    }
    for (int turn : {kUp, kDown}) {
      maze.reset(seed);
      sum += walk_and_turn(maze, turn).reward;
      ++cases;
    }
  }
  CHECK(cases == 4);
  CHECK(sum / cases == 0.5);
}

TEST_CASE("tmaze noise channel is seeded") {
  TMaze a({8, RewardMode::Sparse, true});
  TMaze b({8, RewardMode::Sparse, true});
  std::set<int> seen;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto oa = a.reset(seed);
    auto ob = b.reset(seed);
    CHECK(oa == ob);
    for (int i = 0; i < 8; ++i) {
      auto ra = a.step(kRight);
      auto rb = b.step(kRight);
      CHECK(ra.observation == rb.observation);
      seen.insert(ra.observation[3]);
    }
  }
  CHECK(seen == std::set<int>{-1, 0, 1});
}

TEST_CASE("minigrid fixed layout") {
  MinigridMemory grid({9});
  grid.reset(0);
  CHECK(grid.corridor_base() == 0);
  CHECK(grid.x() == 1);
  CHECK(grid.y() == 2);
  CHECK(grid.heading() == Heading::South);
  const auto o = grid.observe();
  // Clue two cells ahead, floor in between.
  CHECK(o.cells[2][1] == grid.clue_object());
  CHECK(o.cells[1][1] == CellCode::Floor);
  CHECK(grid.horizon_profile() == core::HorizonProfile{10});
  CHECK(core::correlation_horizon(grid.episode_pair()) == 10);
  CHECK(grid.success_reward(19) == doctest::Approx(0.82));
}

TEST_CASE("minigrid variable mode spans horizons 7..L+1") {
  MinigridMemory grid({MinigridConfig{.map_size = 9, .corridor_mode = CorridorMode::Variable}});
  CHECK(grid.horizon_profile() == core::HorizonProfile::range(7, 10));
  std::set<std::int64_t> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    grid.reset(seed);
    const auto xi = core::correlation_horizon(grid.episode_pair());
    CHECK(grid.horizon_profile().contains(xi));
    CHECK(xi == 9 + 1 - grid.corridor_base());
    seen.insert(xi);
  }
  CHECK(seen == std::set<std::int64_t>{7, 8, 9, 10});
}

TEST_CASE("minigrid shortest solution turns at the recall step") {
  for (auto mode : {CorridorMode::Fixed, CorridorMode::Variable}) {
    MinigridMemory grid({MinigridConfig{.map_size = 11, .corridor_mode = mode}});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      grid.reset(seed);
      const auto pair = grid.episode_pair();
      auto act = [&](GridAction a) { return grid.step(static_cast<int>(a)); };
      act(GridAction::TurnLeft);
      act(GridAction::TurnLeft);
      while (grid.y() < 11) REQUIRE_FALSE(act(GridAction::Forward).done);
      CHECK(grid.elapsed() == pair.recall.t_r);
      // West arm (index 0) is on the left when facing north.
      const bool west = grid.arm_objects()[0] == grid.clue_object();
      act(west ? GridAction::TurnLeft : GridAction::TurnRight);
      auto r = act(GridAction::Forward);
      CHECK(r.done);
      CHECK(r.success);
      CHECK(r.reward == doctest::Approx(grid.success_reward(pair.recall.t_r + 2)));
    }
  }
}

TEST_CASE("minigrid: no path recalls the clue sooner than the declared horizon") {
  // Random walks; the clue is seen only from the start row or below, so the
  // gap between its last sighting and the final arm entry is at least xi.
  util::Rng rng(99);
  for (auto mode : {CorridorMode::Fixed, CorridorMode::Variable}) {
    MinigridMemory grid({MinigridConfig{.map_size = 9, .corridor_mode = mode, .time_limit = 200}});
    int finished = 0;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
      auto obs = grid.reset(seed);
      const auto xi = core::correlation_horizon(grid.episode_pair());
      const int start_row = grid.corridor_base() + 2;
      int last_seen = 0;
      while (!grid.done()) {
        if (grid.y() <= start_row &&
            std::any_of(obs.begin() + 1, obs.end(), is_object_code)) {
          last_seen = grid.elapsed();
        }
        // Forward-biased so that some walks reach the arms.
        const int a = rng.bernoulli(0.6) ? 2 : static_cast<int>(rng.uniform_below(2));
        const int t = grid.elapsed();
        auto r = grid.step(a);
        obs = r.observation;
        if (r.done && grid.x() != 1) {
          CHECK(t - last_seen >= xi);
          ++finished;
        }
      }
    }
    CHECK(finished > 50);
  }
}

TEST_CASE("minigrid episodes are pure functions of seed and actions") {
  MinigridMemory a({MinigridConfig{.map_size = 9, .corridor_mode = CorridorMode::Variable}});
  MinigridMemory b({MinigridConfig{.map_size = 9, .corridor_mode = CorridorMode::Variable}});
  util::Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(a.reset(seed) == b.reset(seed));
    while (!a.done()) {
      const int act = static_cast<int>(rng.uniform_below(3));
      auto ra = a.step(act);
      auto rb = b.step(act);
      CHECK(ra.observation == rb.observation);
      CHECK(ra.reward == rb.reward);
      CHECK(ra.done == rb.done);
    }
  }
}

TEST_CASE("minigrid time limit and validation") {
  MinigridMemory grid({MinigridConfig{.map_size = 7, .time_limit = 5}});
  grid.reset(0);
  StepResult r;
  for (int i = 0; i < 5; ++i) r = grid.step(static_cast<int>(GridAction::TurnLeft));
  CHECK(r.done);
  CHECK_FALSE(r.success);
  CHECK_THROWS_AS(MinigridMemory({MinigridConfig{.map_size = 8}}), ConfigError);
  CHECK_THROWS_AS(MinigridMemory({MinigridConfig{.map_size = 5}}), ConfigError);
}

TEST_CASE("grid observation tokens round-trip") {
  MinigridMemory grid({9});
  grid.reset(4);
  const auto o = grid.observe();
  CHECK(GridObservation::from_tokens(o.tokens()) == o);
  CHECK(o.tokens().size() == 10);
}

TEST_CASE("corridor control is an MDP") {
  CorridorMdp corridor({4});
  CHECK_FALSE(core::is_memory_intensive(corridor.horizon_profile()));
  corridor.reset(0);
  StepResult r;
  for (int i = 0; i < 4; ++i) r = corridor.step(0);
  CHECK(r.done);
  CHECK(r.reward == 1.0);
}

TEST_CASE("env specs parse and print") {
  CHECK(to_spec(parse_env_spec("tmaze:L=10")) == "tmaze:L=10,sparse");
  CHECK(to_spec(parse_env_spec("tmaze:L=7,dense,noise")) == "tmaze:L=7,dense,noise");
  const auto mg = parse_env_spec("minigrid:L=9,variable");
  CHECK(std::get<MinigridConfig>(mg).corridor_mode == CorridorMode::Variable);
  CHECK(horizon_profile(mg) == core::HorizonProfile::range(7, 10));
  CHECK(parse_env_spec(to_spec(mg)) == mg);
  CHECK(env_config_from_json(to_json(mg)) == mg);
  CHECK(env_config_from_json(nlohmann::json("tmaze:L=5")) == parse_env_spec("tmaze:L=5"));
  CHECK_THROWS_AS(parse_env_spec("pong"), ConfigError);
  CHECK_THROWS_AS(parse_env_spec("tmaze:width=3"), ConfigError);
  CHECK_THROWS_AS(parse_env_spec("tmaze:L=abc"), ConfigError);
  CHECK(registered_environments().size() >= 3);
}
