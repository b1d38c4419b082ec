#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "memscope/env/environment.hpp"

namespace memscope::agents {

// One completed (o, a, r) triplet of the episode history.
struct StepRecord {
  env::Observation observation;
  int action = 0;
  double reward = 0.0;
};

// 128-bit digest of a canonical token sequence. Two independently mixed
// 64-bit lanes keep collisions negligible at tabular scale.
struct WindowKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  std::string hex() const;
  static WindowKey from_hex(std::string_view hex);

  friend bool operator==(const WindowKey&, const WindowKey&) = default;
  friend auto operator<=>(const WindowKey&, const WindowKey&) = default;
};

WindowKey digest(std::span<const std::int64_t> tokens) noexcept;

// Token tags separating the window from mechanism suffixes.
inline constexpr std::int64_t kWindowTag = 0x57494e44;   // "WIND"
inline constexpr std::int64_t kLatchTag = 0x4c415443;    // "LATC"
inline constexpr std::int64_t kHistoryTag = 0x48495354;  // "HIST"

// Appends the canonical encoding of the context window at step t: the
// current observation plus the newest min(t, k - 1) completed triplets, so
// the window spans exactly k steps h_{t-k+1:t}. Length prefixes make the
// encoding injective over observation alphabets and window lengths.
void append_window_tokens(std::vector<std::int64_t>& out,
                          const std::deque<StepRecord>& history,
                          const env::Observation& current, std::int64_t k);

// Bit pattern of a reward, so equal rewards always encode identically.
std::int64_t reward_token(double reward) noexcept;

}  // namespace memscope::agents

template <>
struct std::hash<memscope::agents::WindowKey> {
  std::size_t operator()(const memscope::agents::WindowKey& k) const noexcept {
    return static_cast<std::size_t>(k.lo ^ (k.hi * 0x9e3779b97f4a7c15ULL));
  }
};
