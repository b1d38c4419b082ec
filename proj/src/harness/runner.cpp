#include "memscope/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <thread>

#include "memscope/agents/window_agent.hpp"
#include "memscope/error.hpp"
#include "memscope/util/rng.hpp"

namespace memscope::harness {

namespace {

constexpr std::uint64_t kAgentStream = 0x61676e74;  // "agnt"
constexpr std::uint64_t kTrainStream = 0x7472616e;  // "tran"

}  // namespace

std::uint64_t run_seed(const ExperimentConfig& config, int run) noexcept {
  return util::derive_seed(config.base_seed, static_cast<std::uint64_t>(run));
}

std::vector<std::int64_t> evaluation_points(const ExperimentConfig& config) {
  std::vector<std::int64_t> points{0};
  const auto every = config.effective_eval_every();
  for (std::int64_t e = every; e < config.train_episodes; e += every) points.push_back(e);
  if (config.train_episodes > 0) points.push_back(config.train_episodes);
  return points;
}

EpisodeOutcome play_episode(env::Environment& environment, agents::Agent& agent,
                            std::uint64_t seed) {
  EpisodeOutcome out;
  auto obs = environment.reset(seed);
  agent.begin_episode();
  for (;;) {
    const int action = agent.act(obs);
    auto step = environment.step(action);
    out.ret += step.reward;
    ++out.steps;
    agent.learn({step.reward, step.observation, step.done});
    if (step.done) {
      out.success = step.success;
      break;
    }
    obs = std::move(step.observation);
  }
  return out;
}

namespace {

RunRecord execute_run(const StampedConfig& stamped, int run, const RunOptions& options) {
  const auto& cfg = stamped.config();
  RunRecord record{.config_id = cfg.config_id,
                   .run = run,
                   .seed = run_seed(cfg, run),
                   .stamp = stamped.stamp(),
                   .evals = {},
                   .error = std::nullopt};
  try {
    auto train_env = env::make_environment(cfg.env);
    auto eval_env = env::make_environment(cfg.env);
    auto agent = make_agent(cfg.agent, *train_env, cfg.env,
                            util::derive_seed(record.seed, kAgentStream));
    const std::uint64_t train_stream = util::derive_seed(record.seed, kTrainStream);

    const agents::EpsilonSchedule schedule{
        .start = cfg.agent.epsilon_start,
        .end = cfg.agent.epsilon_end,
        .decay_episodes = static_cast<std::int64_t>(
            std::llround(cfg.agent.epsilon_decay_fraction * static_cast<double>(cfg.train_episodes)))};

    const auto points = evaluation_points(cfg);
    record.evals.reserve(points.size() * cfg.eval_seeds.size());
    auto evaluate = [&](std::int64_t done_episodes) {
      agent->set_exploration(0.0);
      agent->set_learning(false);
      for (auto seed : cfg.eval_seeds) {
        const auto outcome = play_episode(*eval_env, *agent, seed);
        record.evals.push_back({done_episodes, seed, outcome.success, outcome.ret});
      }
      agent->set_learning(true);
    };

    std::size_t next_point = 0;
    for (std::int64_t e = 0;; ++e) {
      if (next_point < points.size() && points[next_point] == e) {
        evaluate(e);
        ++next_point;
      }
      if (e >= cfg.train_episodes) break;
      agent->set_exploration(schedule.at(e));
      play_episode(*train_env, *agent, util::derive_seed(train_stream, static_cast<std::uint64_t>(e)));
    }

    if (cfg.save_qtables && !options.qtable_dir.empty()) {
      if (const auto* window = dynamic_cast<const agents::WindowQAgent*>(agent.get())) {
        std::filesystem::create_directories(options.qtable_dir);
        window->table().save(std::filesystem::path(options.qtable_dir) /
                             (cfg.config_id + "_run" + std::to_string(run) + ".qtable.json"));
      }
    }
  } catch (const std::exception& e) {
    record.evals.clear();
    record.error = e.what();
  }
  return record;
}

}  // namespace

std::vector<RunRecord> run_experiment(const StampedConfig& stamped, const RunOptions& options) {
  const int runs = stamped.config().runs;
  std::vector<RunRecord> records(static_cast<std::size_t>(runs));
  std::atomic<int> next{0};
  std::mutex sink_mutex;

  auto worker = [&] {
    for (int run = next++; run < runs; run = next++) {
      records[static_cast<std::size_t>(run)] = execute_run(stamped, run, options);
      if (options.sink) {
        std::lock_guard lock(sink_mutex);
        options.sink(records[static_cast<std::size_t>(run)]);
      }
    }
  };

  const int workers = std::clamp(options.workers, 1, runs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  return records;
}

}  // namespace memscope::harness
