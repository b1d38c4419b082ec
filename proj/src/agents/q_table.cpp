#include "memscope/agents/q_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "memscope/error.hpp"

namespace memscope::agents {

QTable::QTable(int num_actions) : num_actions_(num_actions) {
  if (num_actions < 1) throw ConfigError("q-table needs at least one action");
}

const double* QTable::row(const WindowKey& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return nullptr;
  return values_.data() + static_cast<std::size_t>(it->second) * num_actions_;
}

double* QTable::mutable_row(const WindowKey& key) {
  auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(index_.size()));
  if (inserted) values_.resize(values_.size() + num_actions_, 0.0);
  return values_.data() + static_cast<std::size_t>(it->second) * num_actions_;
}

double QTable::value(const WindowKey& key, int action) const {
  const double* r = row(key);
  return r ? r[action] : 0.0;
}

double QTable::max_value(const WindowKey& key) const {
  const double* r = row(key);
  return r ? *std::max_element(r, r + num_actions_) : 0.0;
}

int QTable::argmax(const WindowKey& key) const {
  const double* r = row(key);
  if (!r) return 0;
  // max_element returns the first maximum: lowest index wins ties.
  return static_cast<int>(std::max_element(r, r + num_actions_) - r);
}

void QTable::set(const WindowKey& key, int action, double value) {
  if (action < 0 || action >= num_actions_) throw ConfigError("q-table: action out of range");
  mutable_row(key)[action] = value;
}

nlohmann::json QTable::to_json() const {
  std::vector<std::pair<WindowKey, std::uint32_t>> sorted(index_.begin(), index_.end());
  std::sort(sorted.begin(), sorted.end());
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [key, idx] : sorted) {
    const auto* r = values_.data() + static_cast<std::size_t>(idx) * num_actions_;
    entries.push_back({key.hex(), std::vector<double>(r, r + num_actions_)});
  }
  return {{"format", "memscope-qtable"},
          {"version", 1},
          {"actions", num_actions_},
          {"entries", std::move(entries)}};
}

QTable QTable::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "memscope-qtable" || j.at("version") != 1) {
      throw ConfigError("not a memscope q-table (format/version mismatch)");
    }
    QTable t(j.at("actions").get<int>());
    for (const auto& e : j.at("entries")) {
      const auto key = WindowKey::from_hex(e.at(0).get<std::string>());
      const auto q = e.at(1).get<std::vector<double>>();
      if (static_cast<int>(q.size()) != t.num_actions_) {
        throw ConfigError("q-table entry has the wrong number of actions");
      }
      std::copy(q.begin(), q.end(), t.mutable_row(key));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed q-table: ") + e.what());
  }
}

void QTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write q-table to " + path.string());
  out << to_json().dump() << '\n';
}

QTable QTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read q-table from " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed q-table: ") + e.what());
  }
  return from_json(j);
}

bool operator==(const QTable& a, const QTable& b) {
  if (a.num_actions_ != b.num_actions_ || a.size() != b.size()) return false;
  for (const auto& [key, idx] : a.index_) {
    const double* rb = b.row(key);
    if (!rb) return false;
    const double* ra = a.values_.data() + static_cast<std::size_t>(idx) * a.num_actions_;
    if (!std::equal(ra, ra + a.num_actions_, rb)) return false;
  }
  return true;
}

double q_update(QTable& table, const Transition& tr, const QParams& params) {
  if (!std::isfinite(tr.reward) || !std::isfinite(params.learning_rate) ||
      !std::isfinite(params.gamma)) {
    throw ConfigError("q_update: non-finite transition or parameters");
  }
  if (tr.action < 0 || tr.action >= table.num_actions()) {
    throw ConfigError("q_update: action out of range");
  }
  const double q = table.value(tr.key, tr.action);
  const double bootstrap = tr.done ? 0.0 : params.gamma * table.max_value(tr.next_key);
  const double updated = q + params.learning_rate * (tr.reward + bootstrap - q);
  if (updated != q || table.row(tr.key)) table.set(tr.key, tr.action, updated);
  return updated;
}

}  // namespace memscope::agents
