#include "memscope/agents/window_agent.hpp"

#include <algorithm>
#include <sstream>

#include "memscope/error.hpp"

namespace memscope::agents {

double EpsilonSchedule::at(std::int64_t episode) const noexcept {
  if (decay_episodes <= 0 || episode >= decay_episodes) return end;
  const double frac = static_cast<double>(episode) / static_cast<double>(decay_episodes);
  return start + (end - start) * frac;
}

LatchConfig LatchConfig::for_environment(const env::Environment& environment) {
  auto clue = environment.clue_channel();
  if (!clue) {
    throw ConfigError("latch mechanism: environment '" + environment.name() +
                      "' declares no clue channel");
  }
  return {std::move(*clue), environment.episode_bound()};
}

void LatchMechanism::on_observation(const env::Observation& observation) {
  if (slot_) return;
  const auto v = config_.clue.read(observation);
  if (v != 0) slot_ = v;
}

void LatchMechanism::append_key_tokens(std::vector<std::int64_t>& out) const {
  if (!slot_) return;
  out.push_back(kLatchTag);
  out.push_back(*slot_);
}

std::int64_t LatchMechanism::effective_context(std::int64_t k) const {
  return std::max(k, config_.episode_bound);
}

void FullHistoryMechanism::reset() {
  h1_ = 0x452821e638d01377ULL;
  h2_ = 0xbe5466cf34e90c6cULL;
}

void FullHistoryMechanism::fold(std::int64_t token) {
  const auto v = static_cast<std::uint64_t>(token);
  h1_ = util::mix64(h1_ ^ v);
  h2_ = util::mix64(h2_ + (v << 7 | v >> 57) + 0xc0ac29b7c97c50ddULL);
}

void FullHistoryMechanism::on_observation(const env::Observation& observation) {
  fold(static_cast<std::int64_t>(observation.size()));
  for (auto v : observation) fold(v);
}

void FullHistoryMechanism::on_transition(int action, double reward) {
  fold(action);
  fold(reward_token(reward));
}

void FullHistoryMechanism::append_key_tokens(std::vector<std::int64_t>& out) const {
  out.push_back(kHistoryTag);
  out.push_back(static_cast<std::int64_t>(h1_));
  out.push_back(static_cast<std::int64_t>(h2_));
}

std::int64_t FullHistoryMechanism::effective_context(std::int64_t k) const {
  return std::max(k, episode_bound_);
}

WindowQAgent::WindowQAgent(WindowAgentParams params)
    : params_(params), table_(params.num_actions), rng_(params.seed) {
  if (params_.k < 1) throw ConfigError("window agent: K must be >= 1");
  if (params_.q.gamma < 0.0 || params_.q.gamma > 1.0) {
    throw ConfigError("window agent: gamma must lie in [0, 1]");
  }
}

void WindowQAgent::attach(std::unique_ptr<Mechanism> mechanism) {
  mechanism_ = std::move(mechanism);
  if (mechanism_) mechanism_->reset();
}

core::ContextSpec WindowQAgent::context() const {
  return core::ContextSpec(params_.k,
                           mechanism_ ? mechanism_->effective_context(params_.k) : params_.k);
}

std::string WindowQAgent::describe() const {
  std::ostringstream out;
  out << "window(K=" << params_.k;
  if (mechanism_) out << ", " << mechanism_->name();
  out << ')';
  return out.str();
}

void WindowQAgent::begin_episode() {
  history_.clear();
  has_current_ = false;
  last_action_ = -1;
  if (mechanism_) mechanism_->reset();
}

std::vector<std::int64_t> WindowQAgent::current_tokens(const env::Observation& observation) const {
  std::vector<std::int64_t> tokens;
  append_window_tokens(tokens, history_, observation, params_.k);
  if (mechanism_) mechanism_->append_key_tokens(tokens);
  return tokens;
}

WindowKey WindowQAgent::current_key(const env::Observation& observation) const {
  scratch_.clear();
  append_window_tokens(scratch_, history_, observation, params_.k);
  if (mechanism_) mechanism_->append_key_tokens(scratch_);
  return digest(scratch_);
}

void WindowQAgent::enter(const env::Observation& observation) {
  current_ = observation;
  has_current_ = true;
  if (mechanism_) mechanism_->on_observation(observation);
  current_key_ = current_key(observation);
}

int WindowQAgent::act(const env::Observation& observation) {
  if (!has_current_) {
    enter(observation);
  } else if (observation != current_) {
    throw Error("window agent: act() observation differs from the last learn() observation");
  }
  if (epsilon_ > 0.0 && rng_.bernoulli(epsilon_)) {
    last_action_ = static_cast<int>(rng_.uniform_below(static_cast<std::uint64_t>(params_.num_actions)));
  } else {
    last_action_ = table_.argmax(current_key_);
  }
  return last_action_;
}

void WindowQAgent::learn(const Feedback& feedback) {
  if (last_action_ < 0) throw Error("window agent: learn() without a preceding act()");
  const WindowKey key = current_key_;
  history_.push_back({std::move(current_), last_action_, feedback.reward});
  while (static_cast<std::int64_t>(history_.size()) > params_.k - 1) history_.pop_front();
  if (mechanism_) mechanism_->on_transition(last_action_, feedback.reward);
  const int action = last_action_;
  last_action_ = -1;

  enter(feedback.next_observation);
  if (learning_) {
    q_update(table_, {key, action, feedback.reward, current_key_, feedback.done}, params_.q);
  }
}

std::unique_ptr<WindowQAgent> latch_mechanism(std::unique_ptr<WindowQAgent> agent,
                                              LatchConfig config) {
  agent->attach(std::make_unique<LatchMechanism>(std::move(config)));
  return agent;
}

std::unique_ptr<WindowQAgent> full_history_mechanism(std::unique_ptr<WindowQAgent> agent,
                                                     std::int64_t episode_bound) {
  agent->attach(std::make_unique<FullHistoryMechanism>(episode_bound));
  return agent;
}

std::unique_ptr<Agent> random_agent(int num_actions, std::uint64_t seed) {
  return std::make_unique<RandomAgent>(num_actions, seed);
}

}  // namespace memscope::agents
