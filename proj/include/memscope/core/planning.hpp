#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memscope/core/horizon.hpp"

namespace memscope::core {

enum class MemoryTarget { Ltm, Stm };

std::string_view to_string(MemoryTarget t) noexcept;
std::optional<MemoryTarget> parse_memory_target(std::string_view s) noexcept;

// Recommended experiment geometry for one memory type.
struct ExperimentPlan {
  MemoryTarget target;
  std::int64_t k_bar;
  std::int64_t k_min;
  std::optional<std::int64_t> k_max;           // nullopt: unbounded above
  std::optional<std::int64_t> required_k_eff;  // LTM only: K_eff >= this
  std::int64_t recommended_k;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  // "[1, 10]" or "[11, inf)".
  std::string k_interval() const;
};

// LTM: K in [1, K_bar] with K_eff >= max Xi (requires a mechanism).
// STM: K >= max Xi. When min Xi < max Xi a warning flags that K in
// (K_bar, max Xi) is the Mixed band rather than pure STM.
// Throws NotMemoryIntensive for min Xi == 1 and ValidationError for an LTM
// target without a mechanism.
ExperimentPlan plan_experiment(const HorizonProfile& profile, MemoryTarget target,
                               bool mechanism_available);

}  // namespace memscope::core
