#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "memscope/agents/window_key.hpp"

namespace memscope::agents {

struct QParams {
  double learning_rate = 0.1;
  double gamma = 1.0;  // in [0, 1]
};

struct Transition {
  WindowKey key;
  int action = 0;
  double reward = 0.0;
  WindowKey next_key;
  bool done = false;
};

// Action values per window key. Unseen keys read as all zeros.
class QTable {
 public:
  explicit QTable(int num_actions);

  int num_actions() const noexcept { return num_actions_; }
  std::size_t size() const noexcept { return index_.size(); }

  double value(const WindowKey& key, int action) const;
  double max_value(const WindowKey& key) const;
  // Greedy action; ties go to the lowest action index.
  int argmax(const WindowKey& key) const;
  void set(const WindowKey& key, int action, double value);
  // Values for a key, or nullptr when it was never written.
  const double* row(const WindowKey& key) const;

  nlohmann::json to_json() const;
  static QTable from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static QTable load(const std::filesystem::path& path);

  friend bool operator==(const QTable& a, const QTable& b);

 private:
  double* mutable_row(const WindowKey& key);

  int num_actions_;
  std::unordered_map<WindowKey, std::uint32_t> index_;
  std::vector<double> values_;
};

// One-step TD update:
//   Q(k,a) += lr * (r + gamma * max_a' Q(k',a') * (1 - done) - Q(k,a)).
// Returns the new Q(k,a). Throws ConfigError for non-finite inputs.
double q_update(QTable& table, const Transition& transition, const QParams& params);

}  // namespace memscope::agents
