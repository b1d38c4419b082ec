#include "memscope/cli/cli.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "memscope/core/context.hpp"
#include "memscope/core/planning.hpp"
#include "memscope/env/registry.hpp"
#include "memscope/error.hpp"
#include "memscope/harness/experiment.hpp"
#include "memscope/harness/export.hpp"
#include "memscope/harness/metrics.hpp"
#include "memscope/harness/runner.hpp"

#ifndef MEMSCOPE_VERSION
#define MEMSCOPE_VERSION "0.0.0"
#endif

namespace memscope::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad integer '" + std::string(s) + "' in xi list");
  }
  return v;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Intervals {
  std::int64_t k_bar;
  std::int64_t xi_max;

  bool mixed_empty() const { return k_bar + 1 > xi_max - 1; }
  std::string ltm() const { return "[1, " + std::to_string(k_bar) + "]"; }
  std::string mixed() const {
    if (mixed_empty()) return "(empty)";
    return "[" + std::to_string(k_bar + 1) + ", " + std::to_string(xi_max - 1) + "]";
  }
  std::string stm() const { return "[" + std::to_string(xi_max) + ", inf)"; }

  json to_json() const {
    return {{"ltm_only", {1, k_bar}},
            {"mixed", mixed_empty() ? json(nullptr) : json{k_bar + 1, xi_max - 1}},
            {"stm_only", {xi_max, nullptr}}};
  }
};

// Horizon source shared by classify and plan.
struct HorizonSource {
  std::string env;
  std::string xi_list;

  void add_to(CLI::App* cmd) {
    auto* e = cmd->add_option("--env", env, "environment spec, e.g. tmaze:L=10");
    auto* x = cmd->add_option("--xi-list", xi_list, "correlation horizons, e.g. 15 or 7..22");
    e->excludes(x);
    x->excludes(e);
  }

  core::HorizonProfile profile() const {
    if (!env.empty()) return env::horizon_profile(env::parse_env_spec(env));
    if (!xi_list.empty()) return parse_xi_list(xi_list);
    throw ConfigError("one of --env or --xi-list is required");
  }

  std::string label() const { return env.empty() ? "xi-list " + xi_list : env; }
};

void require_memory_intensive(const core::HorizonProfile& profile, const std::string& source) {
  if (!core::is_memory_intensive(profile)) {
    throw NotMemoryIntensive(source + " has Xi = " + profile.to_string() +
                             ": min xi = 1, so some decision needs no memory and the "
                             "environment cannot separate LTM from STM (max xi = 1 is an MDP)");
  }
}

std::string class_name(core::MemoryTaskClass c) { return std::string(core::to_string(c)); }

json stamp_json(const harness::ClassificationStamp& s) {
  return {{"class", class_name(s.task_class)},
          {"K", s.k},
          {"K_eff", s.k_eff},
          {"xi_min", s.xi_min},
          {"xi_max", s.xi_max},
          {"K_bar", s.k_bar},
          {"overridden", s.overridden},
          {"note", s.note}};
}

std::string stamp_line(const harness::ClassificationStamp& s) {
  std::string line = class_name(s.task_class) + " K=" + std::to_string(s.k) +
                     " K_eff=" + std::to_string(s.k_eff) + " Xi=[" +
                     std::to_string(s.xi_min) + ", " + std::to_string(s.xi_max) +
                     "] K_bar=" + std::to_string(s.k_bar);
  if (s.overridden) line += " (override)";
  return line;
}

std::string curve_label(const harness::RunRecord& r) {
  return r.config_id + " (" + class_name(r.stamp.task_class) + ", K=" + std::to_string(r.stamp.k) +
         ")";
}

std::optional<harness::PlotMetric> parse_metric(const std::string& s) {
  if (s == "sr" || s == "success") return harness::PlotMetric::SuccessRate;
  if (s == "return") return harness::PlotMetric::Return;
  return std::nullopt;
}

struct PlotOptions {
  std::string metric = "sr";
  std::string layout = "overlay";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--metric", metric, "sr or return")->check(CLI::IsMember({"sr", "return"}));
    cmd->add_option("--layout", layout, "overlay or panels")
        ->check(CLI::IsMember({"overlay", "panels"}));
  }
  harness::PlotMetric plot_metric() const { return *parse_metric(metric); }
  harness::PlotLayout plot_layout() const {
    return layout == "panels" ? harness::PlotLayout::Panels : harness::PlotLayout::Overlay;
  }
};

// Groups records by config, summarizes each group, writes summary.csv and the
// learning-curve SVG into `dir`, and prints one line per config.
void write_reports(const fs::path& dir, std::span<const harness::RunRecord> records,
                   const PlotOptions& plot, const fs::path& svg_path, std::ostream& out) {
  std::map<std::string, std::vector<harness::RunRecord>> groups;
  std::vector<std::string> order;
  for (const auto& r : records) {
    auto [it, inserted] = groups.try_emplace(r.config_id);
    if (inserted) order.push_back(r.config_id);
    it->second.push_back(r);
  }
  std::vector<harness::Curve> curves;
  std::ofstream summary(dir / "summary.csv");
  if (!summary) throw Error("cannot write " + (dir / "summary.csv").string());
  bool header = true;
  for (const auto& id : order) {
    const auto& group = groups.at(id);
    const auto stats = harness::summarize(group);
    harness::write_summary_csv(summary, id, stats, header);
    header = false;
    curves.push_back(harness::make_curve(curve_label(group.front()), stats, plot.plot_metric()));
    const auto& last = stats.back();
    out << id << ": episode " << last.eval_episode << " SR=" << num(last.success_rate.mean)
        << " +/- " << num(last.success_rate.sem) << " return=" << num(last.ret.mean) << " +/- "
        << num(last.ret.sem) << " (" << last.success_rate.n << " runs)\n";
  }
  harness::write_learning_curves_svg(svg_path, curves, plot.plot_layout(), plot.plot_metric());
  out << "wrote " << (dir / "summary.csv").string() << " and " << svg_path.string() << '\n';
}

int cmd_classify(std::int64_t k, std::optional<std::int64_t> k_eff, const HorizonSource& src,
                 bool as_json, std::ostream& out) {
  const auto profile = src.profile();
  require_memory_intensive(profile, src.label());
  const auto task_class = core::classify_context(k, profile);
  const Intervals iv{core::context_memory_border(profile), profile.max()};
  std::optional<core::MechanismVerdict> verdict;
  if (k_eff) verdict = core::validate_mechanism_experiment(core::ContextSpec(k, *k_eff), profile);

  if (as_json) {
    json j{{"class", class_name(task_class)},
           {"K", k},
           {"xi", std::vector<std::int64_t>(profile.horizons().begin(), profile.horizons().end())},
           {"xi_min", profile.min()},
           {"xi_max", profile.max()},
           {"K_bar", iv.k_bar},
           {"intervals", iv.to_json()}};
    if (verdict) {
      j["K_eff"] = *k_eff;
      j["mechanism_valid"] = verdict->valid;
      j["mechanism_reason"] = verdict->reason;
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "class: " << class_name(task_class) << '\n'
      << "K: " << k << '\n'
      << "Xi: " << profile.to_string() << '\n'
      << "K_bar: " << iv.k_bar << '\n'
      << "LTM-only K in " << iv.ltm() << '\n'
      << "Mixed    " << (iv.mixed_empty() ? "" : "K in ") << iv.mixed() << '\n'
      << "STM-only K in " << iv.stm() << '\n';
  if (verdict) {
    out << "mechanism (K_eff=" << *k_eff << "): " << (verdict->valid ? "valid" : "invalid");
    if (!verdict->reason.empty()) out << ", " << verdict->reason;
    out << '\n';
  }
  return kExitOk;
}

int cmd_plan(const HorizonSource& src, const std::string& target_text,
             const std::string& mechanism_text, bool as_json, std::ostream& out) {
  const auto target = core::parse_memory_target(target_text);
  if (!target) throw ConfigError("--target must be ltm or stm");
  const auto mechanism = harness::parse_mechanism(mechanism_text);
  if (!mechanism) throw ConfigError("unknown mechanism '" + mechanism_text + "'");
  const auto profile = src.profile();
  require_memory_intensive(profile, src.label());
  const auto plan =
      core::plan_experiment(profile, *target, *mechanism != harness::MechanismKind::None);

  if (as_json) {
    json j{{"target", std::string(core::to_string(plan.target))},
           {"xi", std::vector<std::int64_t>(profile.horizons().begin(), profile.horizons().end())},
           {"K_bar", plan.k_bar},
           {"K_min", plan.k_min},
           {"K_max", plan.k_max ? json(*plan.k_max) : json(nullptr)},
           {"required_K_eff", plan.required_k_eff ? json(*plan.required_k_eff) : json(nullptr)},
           {"recommended_K", plan.recommended_k},
           {"warnings", plan.warnings},
           {"notes", plan.notes}};
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "target: " << core::to_string(plan.target) << '\n'
      << "Xi: " << profile.to_string() << '\n'
      << "K_bar: " << plan.k_bar << '\n'
      << "K in " << plan.k_interval() << '\n';
  if (plan.required_k_eff) out << "K_eff >= " << *plan.required_k_eff << '\n';
  out << "recommended K: " << plan.recommended_k << '\n';
  for (const auto& w : plan.warnings) out << "warning: " << w << '\n';
  for (const auto& n : plan.notes) out << "note: " << n << '\n';
  return kExitOk;
}

// Validates every experiment in the file; prints accepted stamps and
// rejections. Returns the stamped configs when all pass.
std::optional<std::vector<harness::StampedConfig>> validate_all(
    const std::vector<harness::ExperimentConfig>& configs, bool as_json, std::ostream& out,
    std::ostream& err) {
  std::vector<harness::StampedConfig> stamped;
  json report = json::array();
  bool rejected = false;
  for (const auto& c : configs) {
    try {
      auto s = harness::validate_config(c);
      if (as_json) {
        report.push_back({{"config_id", c.config_id}, {"accepted", true}, {"stamp", stamp_json(s.stamp())}});
      } else {
        out << c.config_id << ": accepted " << stamp_line(s.stamp()) << '\n';
        if (s.stamp().overridden) out << "  override: " << s.stamp().note << '\n';
      }
      stamped.push_back(std::move(s));
    } catch (const ValidationError& e) {
      rejected = true;
      if (as_json) {
        report.push_back({{"config_id", c.config_id},
                          {"accepted", false},
                          {"rule", e.rule()},
                          {"correction", e.correction()}});
      } else {
        err << c.config_id << ": rejected: " << e.rule() << '\n';
        if (!e.correction().empty()) err << "  correction: " << e.correction() << '\n';
      }
    }
  }
  if (as_json) out << report.dump(2) << '\n';
  if (rejected) return std::nullopt;
  return stamped;
}

std::vector<harness::ExperimentConfig> load_with_override(const std::string& path,
                                                          bool allow_mixed) {
  auto configs = harness::load_experiments(path);
  if (allow_mixed) {
    for (auto& c : configs) c.allow_mixed = true;
  }
  return configs;
}

int cmd_validate(const std::string& path, bool allow_mixed, bool as_json, std::ostream& out,
                 std::ostream& err) {
  const auto configs = load_with_override(path, allow_mixed);
  return validate_all(configs, as_json, out, err) ? kExitOk : kExitRejected;
}

fs::path results_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("MEMSCOPE_RESULTS_DIR"); env && *env) return env;
  return "results";
}

int cmd_run(const std::string& path, bool allow_mixed, const std::string& out_flag, int workers,
            const PlotOptions& plot, std::ostream& out, std::ostream& err) {
  const auto configs = load_with_override(path, allow_mixed);
  auto stamped = validate_all(configs, false, out, err);
  if (!stamped) return kExitRejected;

  const fs::path dir = results_dir(out_flag);
  fs::create_directories(dir);
  std::ofstream journal(dir / "journal.jsonl", std::ios::trunc);
  if (!journal) throw Error("cannot write " + (dir / "journal.jsonl").string());

  std::vector<harness::RunRecord> all;
  bool failed = false;
  for (const auto& s : *stamped) {
    const auto& c = s.config();
    harness::RunOptions options;
    options.workers = workers;
    if (c.save_qtables) {
      options.qtable_dir = (dir / "qtables").string();
      fs::create_directories(options.qtable_dir);
    }
    options.sink = [&journal](const harness::RunRecord& r) {
      json line{{"config_id", r.config_id}, {"run", r.run}, {"seed", r.seed}};
      if (r.error) {
        line["error"] = *r.error;
      } else {
        double sr = 0.0;
        double ret = 0.0;
        std::size_t n = 0;
        const auto last = r.evals.empty() ? 0 : r.evals.back().eval_episode;
        for (const auto& e : r.evals) {
          if (e.eval_episode != last) continue;
          sr += e.success ? 1.0 : 0.0;
          ret += e.ret;
          ++n;
        }
        line["final_episode"] = last;
        line["final_success_rate"] = n ? sr / n : 0.0;
        line["final_return"] = n ? ret / n : 0.0;
      }
      journal << line.dump() << '\n';
      journal.flush();
    };

    harness::Manifest manifest;
    manifest.config_id = c.config_id;
    manifest.config_hash = harness::config_hash(c);
    manifest.code_version = MEMSCOPE_VERSION;
    manifest.started_at = harness::iso8601_utc(std::chrono::system_clock::now());
    manifest.eval_seeds = c.eval_seeds;
    manifest.workers = workers;
    for (int r = 0; r < c.runs; ++r) manifest.run_seeds.push_back(harness::run_seed(c, r));

    out << c.config_id << ": running " << c.runs << " runs x " << c.train_episodes
        << " episodes\n";
    auto records = harness::run_experiment(s, options);
    manifest.finished_at = harness::iso8601_utc(std::chrono::system_clock::now());
    harness::write_manifest(dir / (c.config_id + ".manifest.json"), manifest, c, s.stamp());
    for (auto& r : records) {
      if (r.error) {
        failed = true;
        err << c.config_id << " run " << r.run << " failed: " << *r.error << '\n';
      }
      all.push_back(std::move(r));
    }
  }

  harness::write_results_csv(dir / "results.csv", all);
  std::vector<harness::RunRecord> ok;
  for (const auto& r : all) {
    if (!r.error) ok.push_back(r);
  }
  if (!ok.empty()) write_reports(dir, ok, plot, dir / "learning_curve.svg", out);
  out << "wrote " << (dir / "results.csv").string() << '\n';
  return failed ? kExitRuntime : kExitOk;
}

int cmd_report(const std::string& dir_text, const std::string& svg_flag, const PlotOptions& plot,
               std::ostream& out) {
  const fs::path dir = dir_text;
  const fs::path csv = dir / "results.csv";
  if (!fs::exists(csv)) throw Error("no results.csv in " + dir.string());
  const auto records = harness::read_results_csv(csv);
  if (records.empty()) throw Error(csv.string() + " holds no evaluation rows");
  const fs::path svg = svg_flag.empty() ? dir / "learning_curve.svg" : fs::path(svg_flag);
  write_reports(dir, records, plot, svg, out);
  return kExitOk;
}

int cmd_envs(bool as_json, std::ostream& out) {
  json list = json::array();
  for (const auto& e : env::registered_environments()) {
    const auto profile = env::horizon_profile(env::parse_env_spec(e.example_spec));
    if (as_json) {
      list.push_back({{"name", e.name},
                      {"description", e.description},
                      {"example", e.example_spec},
                      {"xi", profile.to_string()}});
    } else {
      out << e.name << "  " << e.description << "\n    example " << e.example_spec
          << "  Xi=" << profile.to_string() << '\n';
    }
  }
  if (as_json) out << list.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

core::HorizonProfile parse_xi_list(std::string_view text) {
  std::vector<std::int64_t> xs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw ConfigError("empty entry in xi list '" + std::string(text) + "'");
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const auto lo = parse_int(item.substr(0, dots));
      const auto hi = parse_int(item.substr(dots + 2));
      if (hi < lo) throw ConfigError("empty range '" + std::string(item) + "' in xi list");
      for (auto x = lo; x <= hi; ++x) xs.push_back(x);
    } else {
      xs.push_back(parse_int(item));
    }
    pos = comma + 1;
  }
  return core::HorizonProfile(std::move(xs));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"memscope: classify, plan and run memory experiments"};
  app.name("memscope");
  app.require_subcommand(1);
  app.set_version_flag("--version", MEMSCOPE_VERSION);

  bool as_json = false;
  bool allow_mixed = false;

  auto* classify = app.add_subcommand("classify", "classify an agent context against an environment");
  std::int64_t k = 0;
  std::optional<std::int64_t> k_eff;
  HorizonSource classify_src;
  classify->add_option("--k", k, "agent context length K")->required();
  classify->add_option("--k-eff", k_eff, "effective context K_eff under a memory mechanism");
  classify_src.add_to(classify);
  classify->add_flag("--json", as_json, "machine-readable output");

  auto* plan = app.add_subcommand("plan", "recommend K for an LTM or STM experiment");
  HorizonSource plan_src;
  std::string target;
  std::string mechanism = "none";
  plan_src.add_to(plan);
  plan->add_option("--target", target, "ltm or stm")->required();
  plan->add_option("--mechanism", mechanism, "none, latch or full_history");
  plan->add_flag("--json", as_json, "machine-readable output");

  auto* validate = app.add_subcommand("validate", "check experiment configs without running");
  std::string config_path;
  validate->add_option("config", config_path, "experiment config (JSON)")->required();
  validate->add_flag("--allow-mixed", allow_mixed, "accept rejected designs, stamped as overrides");
  validate->add_flag("--json", as_json, "machine-readable output");

  auto* run = app.add_subcommand("run", "validate, train, evaluate and export");
  std::string out_dir;
  int workers = 1;
  PlotOptions run_plot;
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_flag("--allow-mixed", allow_mixed, "run rejected designs, stamped as overrides");
  run->add_option("--out", out_dir, "results directory (default $MEMSCOPE_RESULTS_DIR or ./results)");
  run->add_option("--workers", workers, "parallel training runs")->check(CLI::PositiveNumber);
  run_plot.add_to(run);

  auto* report = app.add_subcommand("report", "regenerate summaries and plots from results.csv");
  std::string report_dir;
  std::string svg_out;
  PlotOptions report_plot;
  report->add_option("dir", report_dir, "results directory")->required();
  report->add_option("--svg", svg_out, "plot path (default <dir>/learning_curve.svg)");
  report_plot.add_to(report);

  auto* envs = app.add_subcommand("envs", "registered environments");
  envs->require_subcommand(0, 1);
  envs->add_subcommand("list", "list environments with their horizon profiles");
  envs->add_flag("--json", as_json, "machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitRuntime;
  }

  try {
    if (classify->parsed()) return cmd_classify(k, k_eff, classify_src, as_json, out);
    if (plan->parsed()) return cmd_plan(plan_src, target, mechanism, as_json, out);
    if (validate->parsed()) return cmd_validate(config_path, allow_mixed, as_json, out, err);
    if (run->parsed()) return cmd_run(config_path, allow_mixed, out_dir, workers, run_plot, out, err);
    if (report->parsed()) return cmd_report(report_dir, svg_out, report_plot, out);
    if (envs->parsed()) return cmd_envs(as_json, out);
  } catch (const ValidationError& e) {
    err << "rejected: " << e.rule() << '\n';
    if (!e.correction().empty()) err << "correction: " << e.correction() << '\n';
    return kExitRejected;
  } catch (const NotMemoryIntensive& e) {
    err << "not memory-intensive: " << e.what() << '\n';
    return kExitRejected;
  } catch (const UnsuitableEnvironment& e) {
    err << "unsuitable environment: " << e.what() << '\n';
    return kExitRejected;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace memscope::cli
