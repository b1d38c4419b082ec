#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "memscope/harness/metrics.hpp"
#include "memscope/harness/runner.hpp"

namespace memscope::harness {

inline constexpr const char* kResultsCsvHeader =
    "config_id,run,eval_episode,seed,success,return,K,K_eff,xi_min,xi_max,K_bar,class";

// One row per (run, eval_episode, seed), sorted by config, run, episode, seed.
void write_results_csv(std::ostream& out, std::span<const RunRecord> records);
void write_results_csv(const std::filesystem::path& path, std::span<const RunRecord> records);

// Inverse of write_results_csv; rebuilds one record per (config_id, run).
// Run seeds and override notes are not stored in the CSV and read back as 0/empty.
std::vector<RunRecord> read_results_csv(std::istream& in);
std::vector<RunRecord> read_results_csv(const std::filesystem::path& path);

struct CurvePoint {
  double x = 0.0;
  double mean = 0.0;
  double sem = 0.0;
};

struct Curve {
  std::string label;
  std::vector<CurvePoint> points;
};

enum class PlotMetric { SuccessRate, Return };
enum class PlotLayout { Overlay, Panels };

Curve make_curve(const std::string& label, std::span<const MetricSummary> summary,
                 PlotMetric metric);

// SVG learning curves: mean line plus a +/- SEM band per curve. Overlay
// draws every curve on one axis; Panels gives each curve its own axis.
void write_learning_curves_svg(std::ostream& out, std::span<const Curve> curves,
                               PlotLayout layout, PlotMetric metric);
void write_learning_curves_svg(const std::filesystem::path& path, std::span<const Curve> curves,
                               PlotLayout layout, PlotMetric metric);

void write_summary_csv(std::ostream& out, const std::string& config_id,
                       std::span<const MetricSummary> summary, bool header);

struct Manifest {
  std::string config_id;
  std::string config_hash;
  std::string code_version;
  std::string started_at;
  std::string finished_at;
  std::vector<std::uint64_t> run_seeds;
  std::vector<std::uint64_t> eval_seeds;
  int workers = 1;
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest,
                    const ExperimentConfig& config, const ClassificationStamp& stamp);

std::string iso8601_utc(std::chrono::system_clock::time_point tp);

}  // namespace memscope::harness
