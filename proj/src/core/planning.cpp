#include "memscope/core/planning.hpp"

#include <sstream>

#include "memscope/error.hpp"

namespace memscope::core {

std::string_view to_string(MemoryTarget t) noexcept {
  return t == MemoryTarget::Ltm ? "ltm" : "stm";
}

std::optional<MemoryTarget> parse_memory_target(std::string_view s) noexcept {
  if (s == "ltm" || s == "LTM") return MemoryTarget::Ltm;
  if (s == "stm" || s == "STM") return MemoryTarget::Stm;
  return std::nullopt;
}

std::string ExperimentPlan::k_interval() const {
  std::ostringstream out;
  out << '[' << k_min << ", ";
  if (k_max) {
    out << *k_max << ']';
  } else {
    out << "inf)";
  }
  return out.str();
}

ExperimentPlan plan_experiment(const HorizonProfile& profile, MemoryTarget target,
                               bool mechanism_available) {
  if (!is_memory_intensive(profile)) {
    throw NotMemoryIntensive("profile " + profile.to_string() +
                             " is not memory-intensive (min xi = 1); no K separates "
                             "long-term from short-term memory");
  }
  const auto k_bar = context_memory_border(profile);
  const auto xi_max = profile.max();

  ExperimentPlan plan{.target = target,
                      .k_bar = k_bar,
                      .k_min = 1,
                      .k_max = std::nullopt,
                      .required_k_eff = std::nullopt,
                      .recommended_k = 1,
                      .warnings = {},
                      .notes = {}};

  if (target == MemoryTarget::Ltm) {
    if (!mechanism_available) {
      std::ostringstream fix;
      fix << "attach a memory mechanism with K_eff >= " << xi_max
          << " and use K in [1, " << k_bar << "]";
      throw ValidationError("LTM untestable without memory mechanism", fix.str());
    }
    plan.k_max = k_bar;
    plan.required_k_eff = xi_max;
    plan.recommended_k = 1;
    plan.notes.push_back(
        "any K in the interval isolates long-term memory, but a K close to 1 shows the "
        "effect of the memory mechanism most clearly");
    return plan;
  }

  plan.k_min = xi_max;
  plan.recommended_k = xi_max;
  if (profile.min() < xi_max) {
    std::ostringstream w;
    w << "K in (" << k_bar << ", " << xi_max << ") only satisfies K > K_bar; it is the "
      << "Mixed band where some horizons fall inside the context and others do not, so "
      << "use K >= " << xi_max << " for pure short-term memory";
    plan.warnings.push_back(w.str());
  }
  return plan;
}

}  // namespace memscope::core
