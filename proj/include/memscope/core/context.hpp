#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memscope/core/horizon.hpp"

namespace memscope::core {

// Agent context length K and effective context K_eff under a memory
// mechanism. Without a mechanism K_eff == K.
class ContextSpec {
 public:
  explicit ContextSpec(std::int64_t k) : ContextSpec(k, k) {}
  ContextSpec(std::int64_t k, std::int64_t k_eff);

  std::int64_t k() const noexcept { return k_; }
  std::int64_t k_eff() const noexcept { return k_eff_; }

  friend bool operator==(const ContextSpec&, const ContextSpec&) = default;

 private:
  std::int64_t k_;
  std::int64_t k_eff_;
};

enum class MemoryTaskClass { LtmOnly, Mixed, StmOnly };

std::string_view to_string(MemoryTaskClass c) noexcept;
std::optional<MemoryTaskClass> parse_memory_task_class(std::string_view s) noexcept;

// K in [1, K_bar] -> LtmOnly; (K_bar, max Xi) -> Mixed; [max Xi, inf) -> StmOnly.
// Throws NotMemoryIntensive when min Xi == 1, ConfigError when k < 1.
MemoryTaskClass classify_context(std::int64_t k, const HorizonProfile& profile);

enum class MechanismFailure {
  ContextTooLong,        // K > K_bar: some horizon fits in the base context
  EffectiveContextShort  // max Xi > K_eff: some horizon exceeds the mechanism
};

struct MechanismVerdict {
  bool valid = false;
  std::vector<MechanismFailure> failures;
  std::string reason;
};

// Holds iff K <= K_bar and max Xi <= K_eff, i.e. every horizon lies outside
// the base context and inside the effective one.
// Throws NotMemoryIntensive when min Xi == 1.
MechanismVerdict validate_mechanism_experiment(const ContextSpec& context,
                                               const HorizonProfile& profile);

}  // namespace memscope::core
