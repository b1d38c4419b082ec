#include "memscope/core/context.hpp"

#include <sstream>

#include "memscope/error.hpp"

namespace memscope::core {

ContextSpec::ContextSpec(std::int64_t k, std::int64_t k_eff) : k_(k), k_eff_(k_eff) {
  if (k < 1) throw ConfigError("context length K must be >= 1");
  if (k_eff < k) throw ConfigError("effective context K_eff must be >= K");
}

std::string_view to_string(MemoryTaskClass c) noexcept {
  switch (c) {
    case MemoryTaskClass::LtmOnly: return "LtmOnly";
    case MemoryTaskClass::Mixed: return "Mixed";
    case MemoryTaskClass::StmOnly: return "StmOnly";
  }
  return "?";
}

std::optional<MemoryTaskClass> parse_memory_task_class(std::string_view s) noexcept {
  if (s == "LtmOnly") return MemoryTaskClass::LtmOnly;
  if (s == "Mixed") return MemoryTaskClass::Mixed;
  if (s == "StmOnly") return MemoryTaskClass::StmOnly;
  return std::nullopt;
}

namespace {

void require_memory_intensive(const HorizonProfile& profile) {
  if (!is_memory_intensive(profile)) {
    throw NotMemoryIntensive("profile " + profile.to_string() +
                             " is not memory-intensive (min xi = 1); with max xi = 1 the "
                             "environment is an MDP and no memory type can be validated");
  }
}

}  // namespace

MemoryTaskClass classify_context(std::int64_t k, const HorizonProfile& profile) {
  if (k < 1) throw ConfigError("context length K must be >= 1");
  require_memory_intensive(profile);
  if (k <= context_memory_border(profile)) return MemoryTaskClass::LtmOnly;
  if (k < profile.max()) return MemoryTaskClass::Mixed;
  return MemoryTaskClass::StmOnly;
}

MechanismVerdict validate_mechanism_experiment(const ContextSpec& context,
                                               const HorizonProfile& profile) {
  require_memory_intensive(profile);
  const auto k_bar = context_memory_border(profile);
  MechanismVerdict verdict;
  std::ostringstream reason;
  if (context.k() > k_bar) {
    verdict.failures.push_back(MechanismFailure::ContextTooLong);
    reason << "K=" << context.k() << " > K_bar=" << k_bar
           << " (horizon " << profile.min() << " fits in the base context)";
  }
  if (profile.max() > context.k_eff()) {
    verdict.failures.push_back(MechanismFailure::EffectiveContextShort);
    if (verdict.failures.size() > 1) reason << "; ";
    reason << "xi=" << profile.max() << " > K_eff=" << context.k_eff()
           << " (horizon exceeds the effective context)";
  }
  verdict.valid = verdict.failures.empty();
  if (verdict.valid) {
    reason << "K=" << context.k() << " <= K_bar=" << k_bar << " < xi <= max xi="
           << profile.max() << " <= K_eff=" << context.k_eff();
  }
  verdict.reason = reason.str();
  return verdict;
}

}  // namespace memscope::core
