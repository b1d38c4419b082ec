#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "memscope/error.hpp"
#include "memscope/harness/experiment.hpp"
#include "memscope/harness/export.hpp"
#include "memscope/harness/metrics.hpp"
#include "memscope/harness/runner.hpp"

using namespace memscope;
using namespace memscope::harness;

namespace {

ExperimentConfig tmaze_config(std::int64_t k, MechanismKind mechanism, core::MemoryTarget claim) {
  ExperimentConfig c;
  c.config_id = "t";
  c.env = env::parse_env_spec("tmaze:L=4");
  c.agent.k = k;
  c.agent.mechanism = mechanism;
  c.claim = claim;
  c.train_episodes = 400;
  c.eval_every = 100;
  c.runs = 3;
  c.eval_seeds = {0, 1, 2, 3, 4, 5, 6, 7};
  c.base_seed = 11;
  return c;
}

}  // namespace

TEST_CASE("sample statistics") {
  const double pair[] = {1.0, 0.0};
  const auto s = summarize_sample(pair);
  CHECK(s.mean == 0.5);
  CHECK(s.sem == doctest::Approx(0.5));
  CHECK(s.sem_defined);

  const double one[] = {0.7};
  const auto single = summarize_sample(one);
  CHECK(single.mean == 0.7);
  CHECK(single.sem == 0.0);
  CHECK_FALSE(single.sem_defined);

  const double four[] = {2.0, 4.0, 4.0, 6.0};
  // std = sqrt(8/3), sem = std / 2.
  CHECK(summarize_sample(four).sem == doctest::Approx(std::sqrt(8.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(summarize_sample(std::span<const double>{}), Error);
}

TEST_CASE("validation accepts matching designs") {
  const auto stm = validate_config(tmaze_config(5, MechanismKind::None, core::MemoryTarget::Stm));
  CHECK(stm.stamp().task_class == core::MemoryTaskClass::StmOnly);
  CHECK(stm.stamp().k_bar == 4);
  CHECK_FALSE(stm.stamp().overridden);

  const auto ltm = validate_config(tmaze_config(2, MechanismKind::Latch, core::MemoryTarget::Ltm));
  CHECK(ltm.stamp().task_class == core::MemoryTaskClass::LtmOnly);
  CHECK(ltm.stamp().k_eff == 5);
}

TEST_CASE("validation rejects mismatched designs with an interval") {
  auto rejected = [](const ExperimentConfig& c) -> std::string {
    try {
      validate_config(c);
    } catch (const ValidationError& e) {
      return e.correction();
    }
    return "accepted";
  };
  // LTM claim with K > K_bar.
  CHECK(rejected(tmaze_config(5, MechanismKind::Latch, core::MemoryTarget::Ltm))
            .find("[1, 4]") != std::string::npos);
  // LTM claim without a mechanism.
  CHECK(rejected(tmaze_config(2, MechanismKind::None, core::MemoryTarget::Ltm))
            .find("[1, 4]") != std::string::npos);
  // STM claim with K <= K_bar.
  CHECK(rejected(tmaze_config(3, MechanismKind::None, core::MemoryTarget::Stm))
            .find("[5, inf)") != std::string::npos);

  // Mixed band of a variable-mode profile.
  auto mixed = tmaze_config(8, MechanismKind::None, core::MemoryTarget::Stm);
  mixed.env = env::parse_env_spec("minigrid:L=9,variable");
  CHECK(rejected(mixed).find("[10, inf)") != std::string::npos);

  mixed.allow_mixed = true;
  const auto stamped = validate_config(mixed);
  CHECK(stamped.stamp().overridden);
  CHECK(stamped.stamp().task_class == core::MemoryTaskClass::Mixed);
  CHECK_FALSE(stamped.stamp().note.empty());
}

TEST_CASE("validation rejects environments that are not memory-intensive") {
  auto c = tmaze_config(1, MechanismKind::None, core::MemoryTarget::Stm);
  c.env = env::parse_env_spec("corridor:L=5");
  CHECK_THROWS_AS(validate_config(c), ValidationError);
}

TEST_CASE("config JSON round-trip and hash") {
  auto c = tmaze_config(3, MechanismKind::Latch, core::MemoryTarget::Ltm);
  c.agent.gamma = 0.9;
  const auto back = experiment_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  auto d = c;
  d.base_seed = 12;
  CHECK(config_hash(d) != config_hash(c));

  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"agent": {"k": 2}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      experiment_from_json(nlohmann::json::parse(R"({"env": "tmaze:L=4", "claim": "both"})")),
      ConfigError);
  const auto ranged = experiment_from_json(
      nlohmann::json::parse(R"({"env": "tmaze:L=4", "eval_seeds": {"from": 3, "to": 5}})"));
  CHECK(ranged.eval_seeds == std::vector<std::uint64_t>{3, 4, 5});
}

TEST_CASE("default evaluation protocol") {
  ExperimentConfig c;
  CHECK(c.runs == 3);
  CHECK(c.eval_seeds.size() == 100);
  CHECK(c.eval_seeds.front() == 0);
  CHECK(c.eval_seeds.back() == 99);
  c.train_episodes = 1000;
  CHECK(c.effective_eval_every() == 50);
  const auto points = evaluation_points(c);
  CHECK(points.size() == 21);
  CHECK(points.front() == 0);
  CHECK(points.back() == 1000);
}

TEST_CASE("run seeds are distinct per run and stable") {
  const auto c = tmaze_config(5, MechanismKind::None, core::MemoryTarget::Stm);
  CHECK(run_seed(c, 0) != run_seed(c, 1));
  CHECK(run_seed(c, 2) == run_seed(c, 2));
}

TEST_CASE("runs are identical for any worker count") {
  const auto stamped = validate_config(tmaze_config(5, MechanismKind::None, core::MemoryTarget::Stm));
  RunOptions serial;
  RunOptions parallel;
  parallel.workers = 3;
  const auto one = run_experiment(stamped, serial);
  const auto three = run_experiment(stamped, parallel);
  CHECK(one == three);
  REQUIRE(one.size() == 3);
  for (const auto& r : one) {
    CHECK_FALSE(r.error.has_value());
    CHECK(r.evals.size() == 5 * 8);
    CHECK(r.stamp == stamped.stamp());
  }
  std::ostringstream a, b;
  write_results_csv(a, one);
  write_results_csv(b, three);
  CHECK(a.str() == b.str());
}

TEST_CASE("results CSV round-trip") {
  const auto stamped =
      validate_config(tmaze_config(2, MechanismKind::Latch, core::MemoryTarget::Ltm));
  const auto records = run_experiment(stamped);
  std::ostringstream out;
  write_results_csv(out, records);
  CHECK(out.str().rfind(kResultsCsvHeader, 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_results_csv(in);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].evals == records[i].evals);
    CHECK(back[i].stamp.task_class == records[i].stamp.task_class);
    CHECK(back[i].stamp.k_eff == records[i].stamp.k_eff);
  }
  std::ostringstream again;
  write_results_csv(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("summary follows evaluation points") {
  const auto stamped = validate_config(tmaze_config(5, MechanismKind::None, core::MemoryTarget::Stm));
  const auto records = run_experiment(stamped);
  const auto summary = summarize(records);
  REQUIRE(summary.size() == 5);
  CHECK(summary.front().eval_episode == 0);
  CHECK(summary.back().eval_episode == 400);
  for (const auto& s : summary) {
    CHECK(s.success_rate.n == 3);
    CHECK(s.success_rate.mean >= 0.0);
    CHECK(s.success_rate.mean <= 1.0);
  }
}

TEST_CASE("svg output contains one path per curve") {
  const auto stamped = validate_config(tmaze_config(5, MechanismKind::None, core::MemoryTarget::Stm));
  const auto summary = summarize(run_experiment(stamped));
  const Curve curves[] = {make_curve("a", summary, PlotMetric::SuccessRate),
                          make_curve("b", summary, PlotMetric::SuccessRate)};
  for (auto layout : {PlotLayout::Overlay, PlotLayout::Panels}) {
    std::ostringstream svg;
    write_learning_curves_svg(svg, curves, layout, PlotMetric::SuccessRate);
    const auto text = svg.str();
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(text.find(">a<") != std::string::npos);
  }
}

TEST_CASE("constant samples have zero spread") {
  const double ones[] = {1.0, 1.0, 1.0};
  const auto s = summarize_sample(ones);
  CHECK(s.mean == 1.0);
  CHECK(s.sem == 0.0);
}

TEST_CASE("SEM shrinks as runs increase") {
  // Synthetic per-run success rates: each run is the mean of 100 Bernoulli(0.5) flags.
  std::mt19937_64 gen(3);
  std::bernoulli_distribution flip(0.5);
  auto average_sem = [&](std::size_t runs) {
    double total = 0.0;
    for (int trial = 0; trial < 400; ++trial) {
      std::vector<double> rates(runs);
      for (auto& r : rates) {
        int wins = 0;
        for (int i = 0; i < 100; ++i) wins += flip(gen) ? 1 : 0;
        r = wins / 100.0;
      }
      total += summarize_sample(rates).sem;
    }
    return total / 400.0;
  };
  const double s3 = average_sem(3);
  const double s10 = average_sem(10);
  const double s30 = average_sem(30);
  CHECK(s3 > s10);
  CHECK(s10 > s30);
}

TEST_CASE("a zero budget evaluates the untrained policy once") {
  auto c = tmaze_config(5, MechanismKind::None, core::MemoryTarget::Stm);
  c.train_episodes = 0;
  const auto records = run_experiment(validate_config(c));
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    CHECK(r.evals.size() == c.eval_seeds.size());
    for (const auto& e : r.evals) CHECK(e.eval_episode == 0);
  }
}
