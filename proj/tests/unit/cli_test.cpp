#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "memscope/cli/cli.hpp"
#include "memscope/error.hpp"

using namespace memscope;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& file, const std::string& text) const {
    std::ofstream(path / file) << text;
    return (path / file).string();
  }
};

}  // namespace

TEST_CASE("xi list parsing") {
  CHECK(cli::parse_xi_list("15") == core::HorizonProfile{15});
  CHECK(cli::parse_xi_list("3,5,9") == core::HorizonProfile{3, 5, 9});
  CHECK(cli::parse_xi_list("7..10") == core::HorizonProfile::range(7, 10));
  CHECK(cli::parse_xi_list("7..9,15") == core::HorizonProfile{7, 8, 9, 15});
  CHECK_THROWS_AS(cli::parse_xi_list(""), ConfigError);
  CHECK_THROWS_AS(cli::parse_xi_list("4..x"), ConfigError);
  CHECK_THROWS_AS(cli::parse_xi_list("9..3"), ConfigError);
}

TEST_CASE("classify golden output") {
  const auto r = run({"classify", "--k", "5", "--xi-list", "15"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out ==
        "class: LtmOnly\n"
        "K: 5\n"
        "Xi: {15}\n"
        "K_bar: 14\n"
        "LTM-only K in [1, 14]\n"
        "Mixed    (empty)\n"
        "STM-only K in [15, inf)\n");
}

TEST_CASE("classify a short-term design") {
  const auto r = run({"classify", "--k", "22", "--env", "minigrid:L=21,fixed"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("class: StmOnly\n", 0) == 0);
}

TEST_CASE("classify JSON for a Mixed design") {
  const auto r = run({"classify", "--k", "8", "--env", "minigrid:L=9,variable", "--json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["class"] == "Mixed");
  CHECK(j["K_bar"] == 6);
  CHECK(j["intervals"]["mixed"] == nlohmann::json::array({7, 9}));
  CHECK(j["intervals"]["stm_only"][0] == 10);
  CHECK(j["intervals"]["stm_only"][1].is_null());
}

TEST_CASE("classify with a mechanism reports the verdict") {
  const auto ok = run({"classify", "--k", "4", "--k-eff", "11", "--env", "tmaze:L=10"});
  CHECK(ok.code == cli::kExitOk);
  CHECK(has(ok.out, "valid"));
}

TEST_CASE("exit codes") {
  CHECK(run({"classify", "--k", "3", "--env", "corridor:L=5"}).code == cli::kExitRejected);
  CHECK(run({"classify", "--k", "3", "--xi-list", "1,4"}).code == cli::kExitRejected);
  CHECK(run({"classify", "--k", "3"}).code == cli::kExitRuntime);
  CHECK(run({"classify", "--k", "3", "--env", "nope"}).code == cli::kExitRuntime);
  CHECK(run({"nonsense"}).code == cli::kExitRuntime);
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({"report", "/nonexistent/memscope-dir"}).code == cli::kExitRuntime);
}

TEST_CASE("plan output") {
  const auto ltm = run({"plan", "--env", "tmaze:L=10", "--target", "ltm", "--mechanism", "latch"});
  CHECK(ltm.code == cli::kExitOk);
  CHECK(has(ltm.out, "K in [1, 10]\n"));
  CHECK(has(ltm.out, "K_eff >= 11\n"));

  const auto bare = run({"plan", "--env", "tmaze:L=10", "--target", "ltm"});
  CHECK(bare.code == cli::kExitRejected);
  CHECK(has(bare.out + bare.err, "[1, 10]"));

  const auto stm = run({"plan", "--env", "minigrid:L=21,variable", "--target", "stm", "--json"});
  REQUIRE(stm.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(stm.out);
  CHECK(j["recommended_K"] == 22);
  CHECK(j["K_min"] == 22);
  CHECK(j["K_max"].is_null());
  CHECK_FALSE(j["warnings"].empty());
}

TEST_CASE("validate accepts and rejects configs") {
  TempDir dir("memscope_cli_validate");
  const auto good = dir.write("good.json", R"({"config_id": "good", "env": "tmaze:L=10",
      "agent": {"k": 4, "mechanism": "latch"}, "claim": "ltm", "train_episodes": 10})");
  const auto ok = run({"validate", good});
  CHECK(ok.code == cli::kExitOk);
  CHECK(has(ok.out, "good: accepted"));

  const auto long_k = dir.write("long.json", R"({"config_id": "long", "env": "tmaze:L=10",
      "agent": {"k": 12, "mechanism": "latch"}, "claim": "ltm", "train_episodes": 10})");
  const auto rejected = run({"validate", long_k});
  CHECK(rejected.code == cli::kExitRejected);
  CHECK(has(rejected.err, "long: rejected"));
  CHECK(has(rejected.err, "[1, 10]"));

  const auto bare = dir.write("bare.json", R"({"config_id": "bare", "env": "tmaze:L=10",
      "agent": {"k": 4}, "claim": "ltm", "train_episodes": 10})");
  CHECK(run({"validate", bare}).code == cli::kExitRejected);
  CHECK(run({"validate", bare, "--allow-mixed"}).code == cli::kExitOk);

  const auto broken = dir.write("broken.json", "{ not json");
  CHECK(run({"validate", broken}).code == cli::kExitRuntime);
}

TEST_CASE("run then report writes the result files") {
  TempDir dir("memscope_cli_run");
  const auto config = dir.write("exp.json", R"({"experiments": [
      {"config_id": "stm", "env": "tmaze:L=4", "agent": {"k": 5}, "claim": "stm",
       "train_episodes": 200, "runs": 2, "eval_seeds": {"from": 0, "to": 9}},
      {"config_id": "ltm", "env": "tmaze:L=4", "agent": {"k": 2, "mechanism": "latch"},
       "claim": "ltm", "train_episodes": 200, "runs": 2, "eval_seeds": {"from": 0, "to": 9},
       "save_qtables": true}]})");
  const auto out_dir = (dir.path / "out").string();
  const auto r = run({"run", config, "--out", out_dir, "--workers", "2"});
  REQUIRE(r.code == cli::kExitOk);
  for (const char* f : {"results.csv", "summary.csv", "learning_curve.svg", "journal.jsonl",
                        "stm.manifest.json", "ltm.manifest.json"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / f));
  }
  CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "qtables"));

  std::ifstream journal(std::filesystem::path(out_dir) / "journal.jsonl");
  int lines = 0;
  for (std::string line; std::getline(journal, line);) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("final_success_rate"));
    ++lines;
  }
  CHECK(lines == 4);

  const auto svg = (dir.path / "again.svg").string();
  CHECK(run({"report", out_dir, "--svg", svg, "--layout", "panels"}).code == cli::kExitOk);
  CHECK(std::filesystem::exists(svg));
}

TEST_CASE("run refuses invalid designs before training") {
  TempDir dir("memscope_cli_reject");
  const auto config = dir.write("exp.json", R"({"config_id": "mixed",
      "env": "minigrid:L=9,variable", "agent": {"k": 8}, "claim": "stm", "train_episodes": 10})");
  const auto out_dir = (dir.path / "out").string();
  const auto r = run({"run", config, "--out", out_dir});
  CHECK(r.code == cli::kExitRejected);
  CHECK(has(r.err, "[10, inf)"));
  CHECK_FALSE(std::filesystem::exists(std::filesystem::path(out_dir) / "results.csv"));
}

TEST_CASE("envs lists every environment") {
  const auto r = run({"envs"});
  CHECK(r.code == cli::kExitOk);
  CHECK(has(r.out, "tmaze"));
  CHECK(has(r.out, "minigrid"));
  CHECK(has(r.out, "corridor"));
}
