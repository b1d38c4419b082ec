#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace memscope::core {

// An event starting at step t_e and lasting delta_t further steps.
// delta_t == 0 is an instantaneous one-step event.
struct EventWindow {
  std::int64_t t_e = 0;
  std::int64_t delta_t = 0;
};

// The step at which the agent must act on the event.
struct RecallPoint {
  std::int64_t t_r = 0;
};

struct EventRecallPair {
  EventWindow event;
  RecallPoint recall;
};

// xi = t_r - t_e - delta_t + 1. Throws ConfigError for negative fields or a
// recall that precedes the end of the event (xi < 1).
std::int64_t correlation_horizon(const EventRecallPair& pair);

// The multiset Xi of correlation horizons an environment induces. Always
// non-empty with every element >= 1; stored sorted.
class HorizonProfile {
 public:
  // Throws UnsuitableEnvironment when `horizons` is empty and ConfigError when
  // an element is < 1.
  explicit HorizonProfile(std::vector<std::int64_t> horizons);
  HorizonProfile(std::initializer_list<std::int64_t> horizons)
      : HorizonProfile(std::vector<std::int64_t>(horizons)) {}

  static HorizonProfile from_pairs(std::span<const EventRecallPair> pairs);
  // Inclusive range {lo, lo+1, ..., hi}.
  static HorizonProfile range(std::int64_t lo, std::int64_t hi);

  std::int64_t min() const noexcept { return horizons_.front(); }
  std::int64_t max() const noexcept { return horizons_.back(); }
  std::size_t size() const noexcept { return horizons_.size(); }
  std::span<const std::int64_t> horizons() const noexcept { return horizons_; }
  bool contains(std::int64_t xi) const;

  // Compact rendering, e.g. "{11}", "{7..22}" or "{3,5,9}".
  std::string to_string() const;

  friend bool operator==(const HorizonProfile&, const HorizonProfile&) = default;

 private:
  std::vector<std::int64_t> horizons_;
};

// min Xi > 1.
bool is_memory_intensive(const HorizonProfile& profile) noexcept;

// K_bar = min Xi - 1. Zero when the profile is not memory-intensive.
std::int64_t context_memory_border(const HorizonProfile& profile) noexcept;

}  // namespace memscope::core
