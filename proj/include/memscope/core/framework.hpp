#pragma once

#include <cstdint>
#include <string_view>

namespace memscope::core {

enum class InnerLoopKind { Mdp, Pomdp };

// Training setting: number of environments, episodes per environment, and
// the kind of task solved inside one episode.
struct TaskSetting {
  std::int64_t n_envs = 1;
  std::int64_t n_eps = 1;
  InnerLoopKind inner_loop = InnerLoopKind::Pomdp;
};

enum class Framework { MemoryDM, MetaRlInnerOuterMemory, MetaRlOuterOnly };
enum class MemoryKind { Declarative, Procedural };

struct FrameworkLabel {
  Framework framework;
  MemoryKind memory;

  // Task name as tabulated: "Memory DM", "Single-task Meta-RL",
  // "Multi-task 0-shot Meta-RL" or "Multi-task Meta-RL".
  std::string_view task_name;
  // True when the LTM/STM split applies (the inner loop is a POMDP).
  bool ltm_stm_applicable;

  friend bool operator==(const FrameworkLabel&, const FrameworkLabel&) = default;
};

std::string_view to_string(Framework f) noexcept;
std::string_view to_string(MemoryKind m) noexcept;
std::string_view to_string(InnerLoopKind k) noexcept;

// Throws ConfigError when n_envs or n_eps is < 1.
FrameworkLabel classify_framework(const TaskSetting& setting);

}  // namespace memscope::core
