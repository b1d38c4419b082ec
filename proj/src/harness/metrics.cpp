#include "memscope/harness/metrics.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "memscope/error.hpp"

namespace memscope::harness {

SampleStats summarize_sample(std::span<const double> values) {
  if (values.empty()) throw Error("cannot summarize an empty sample");
  SampleStats s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.sem = sd / std::sqrt(static_cast<double>(s.n));
  s.sem_defined = true;
  return s;
}

std::vector<MetricSummary> summarize(std::span<const RunRecord> records) {
  struct Acc {
    double success = 0.0;
    double ret = 0.0;
    std::size_t n = 0;
  };
  // eval_episode -> per-run means, in run order
  std::map<std::int64_t, std::vector<std::pair<double, double>>> per_point;
  for (const auto& rec : records) {
    if (rec.error || rec.evals.empty()) continue;
    std::map<std::int64_t, Acc> acc;
    for (const auto& e : rec.evals) {
      auto& a = acc[e.eval_episode];
      a.success += e.success ? 1.0 : 0.0;
      a.ret += e.ret;
      ++a.n;
    }
    for (const auto& [episode, a] : acc) {
      const auto n = static_cast<double>(a.n);
      per_point[episode].emplace_back(a.success / n, a.ret / n);
    }
  }
  if (per_point.empty()) throw Error("no evaluation records to summarize");

  std::vector<MetricSummary> out;
  out.reserve(per_point.size());
  for (const auto& [episode, runs] : per_point) {
    std::vector<double> sr, ret;
    for (const auto& [s, r] : runs) {
      sr.push_back(s);
      ret.push_back(r);
    }
    out.push_back({episode, summarize_sample(sr), summarize_sample(ret)});
  }
  return out;
}

}  // namespace memscope::harness
