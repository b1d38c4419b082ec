#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "memscope/harness/runner.hpp"

namespace memscope::harness {

struct SampleStats {
  double mean = 0.0;
  double sem = 0.0;  // sample std (n - 1) / sqrt(n)
  std::size_t n = 0;
  bool sem_defined = false;  // false for n == 1, where sem is reported as 0
};

// Throws Error for an empty sample.
SampleStats summarize_sample(std::span<const double> values);

struct MetricSummary {
  std::int64_t eval_episode = 0;
  SampleStats success_rate;  // across runs of per-run mean success
  SampleStats ret;           // across runs of per-run mean return
};

// One summary per evaluation point, ordered by eval_episode. Aborted runs
// are skipped. Throws Error when no record carries evaluations.
std::vector<MetricSummary> summarize(std::span<const RunRecord> records);

}  // namespace memscope::harness
