#include "memscope/core/horizon.hpp"

#include <algorithm>
#include <sstream>

#include "memscope/error.hpp"

namespace memscope::core {

std::int64_t correlation_horizon(const EventRecallPair& pair) {
  const auto& [event, recall] = pair;
  if (event.t_e < 0 || event.delta_t < 0 || recall.t_r < 0) {
    throw ConfigError("event-recall pair has a negative time field");
  }
  const std::int64_t xi = recall.t_r - event.t_e - event.delta_t + 1;
  if (xi < 1) {
    std::ostringstream msg;
    msg << "recall at t_r=" << recall.t_r << " precedes the end of the event at t="
        << event.t_e + event.delta_t;
    throw ConfigError(msg.str());
  }
  return xi;
}

HorizonProfile::HorizonProfile(std::vector<std::int64_t> horizons)
    : horizons_(std::move(horizons)) {
  if (horizons_.empty()) {
    throw UnsuitableEnvironment(
        "environment is not suitable for memory testing: it has no event-recall pairs");
  }
  if (std::any_of(horizons_.begin(), horizons_.end(), [](auto xi) { return xi < 1; })) {
    throw ConfigError("correlation horizons must be >= 1");
  }
  std::sort(horizons_.begin(), horizons_.end());
}

HorizonProfile HorizonProfile::from_pairs(std::span<const EventRecallPair> pairs) {
  std::vector<std::int64_t> xs;
  xs.reserve(pairs.size());
  for (const auto& p : pairs) xs.push_back(correlation_horizon(p));
  return HorizonProfile(std::move(xs));
}

HorizonProfile HorizonProfile::range(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ConfigError("empty horizon range");
  std::vector<std::int64_t> xs;
  xs.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (auto x = lo; x <= hi; ++x) xs.push_back(x);
  return HorizonProfile(std::move(xs));
}

bool HorizonProfile::contains(std::int64_t xi) const {
  return std::binary_search(horizons_.begin(), horizons_.end(), xi);
}

std::string HorizonProfile::to_string() const {
  std::ostringstream out;
  out << '{';
  // A contiguous run of distinct values prints as lo..hi.
  bool contiguous = horizons_.size() > 2;
  for (std::size_t i = 1; contiguous && i < horizons_.size(); ++i) {
    contiguous = horizons_[i] == horizons_[i - 1] + 1;
  }
  if (contiguous) {
    out << min() << ".." << max();
  } else {
    for (std::size_t i = 0; i < horizons_.size(); ++i) {
      if (i) out << ',';
      out << horizons_[i];
    }
  }
  out << '}';
  return out.str();
}

bool is_memory_intensive(const HorizonProfile& profile) noexcept {
  return profile.min() > 1;
}

std::int64_t context_memory_border(const HorizonProfile& profile) noexcept {
  return profile.min() - 1;
}

}  // namespace memscope::core
