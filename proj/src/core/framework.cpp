#include "memscope/core/framework.hpp"

#include "memscope/error.hpp"

namespace memscope::core {

std::string_view to_string(Framework f) noexcept {
  switch (f) {
    case Framework::MemoryDM: return "MemoryDM";
    case Framework::MetaRlInnerOuterMemory: return "MetaRlInnerOuterMemory";
    case Framework::MetaRlOuterOnly: return "MetaRlOuterOnly";
  }
  return "?";
}

std::string_view to_string(MemoryKind m) noexcept {
  return m == MemoryKind::Declarative ? "Declarative" : "Procedural";
}

std::string_view to_string(InnerLoopKind k) noexcept {
  return k == InnerLoopKind::Mdp ? "MDP" : "POMDP";
}

FrameworkLabel classify_framework(const TaskSetting& setting) {
  if (setting.n_envs < 1 || setting.n_eps < 1) {
    throw ConfigError("n_envs and n_eps must both be >= 1");
  }
  if (setting.n_envs * setting.n_eps == 1) {
    return {Framework::MemoryDM, MemoryKind::Declarative, "Memory DM", true};
  }
  std::string_view name = setting.n_envs == 1  ? "Single-task Meta-RL"
                          : setting.n_eps == 1 ? "Multi-task 0-shot Meta-RL"
                                               : "Multi-task Meta-RL";
  if (setting.inner_loop == InnerLoopKind::Pomdp) {
    return {Framework::MetaRlInnerOuterMemory, MemoryKind::Procedural, name, true};
  }
  return {Framework::MetaRlOuterOnly, MemoryKind::Procedural, name, false};
}

}  // namespace memscope::core
