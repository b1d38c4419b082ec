#include "memscope/agents/window_key.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>

#include "memscope/error.hpp"
#include "memscope/util/rng.hpp"

namespace memscope::agents {

std::string WindowKey::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

WindowKey WindowKey::from_hex(std::string_view hex) {
  if (hex.size() != 32) throw ConfigError("window key must be 32 hex digits");
  WindowKey k;
  auto parse = [&](std::string_view part, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out, 16);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw ConfigError("malformed window key '" + std::string(hex) + "'");
    }
  };
  parse(hex.substr(0, 16), k.hi);
  parse(hex.substr(16), k.lo);
  return k;
}

WindowKey digest(std::span<const std::int64_t> tokens) noexcept {
  std::uint64_t a = 0x243f6a8885a308d3ULL;
  std::uint64_t b = 0x13198a2e03707344ULL;
  for (const auto t : tokens) {
    const auto v = static_cast<std::uint64_t>(t);
    a = util::mix64(a ^ v);
    b = util::mix64(b + std::rotl(v, 29) + 0xa4093822299f31d0ULL);
  }
  a = util::mix64(a ^ tokens.size());
  b = util::mix64(b + tokens.size());
  return {a, b};
}

std::int64_t reward_token(double reward) noexcept {
  // Fold -0.0 into 0.0.
  if (reward == 0.0) reward = 0.0;
  return std::bit_cast<std::int64_t>(reward);
}

void append_window_tokens(std::vector<std::int64_t>& out,
                          const std::deque<StepRecord>& history,
                          const env::Observation& current, std::int64_t k) {
  const auto n_prev = std::min<std::int64_t>(static_cast<std::int64_t>(history.size()), k - 1);
  out.push_back(kWindowTag);
  out.push_back(n_prev);
  for (auto it = history.end() - n_prev; it != history.end(); ++it) {
    out.push_back(static_cast<std::int64_t>(it->observation.size()));
    out.insert(out.end(), it->observation.begin(), it->observation.end());
    out.push_back(it->action);
    out.push_back(reward_token(it->reward));
  }
  out.push_back(static_cast<std::int64_t>(current.size()));
  out.insert(out.end(), current.begin(), current.end());
}

}  // namespace memscope::agents
