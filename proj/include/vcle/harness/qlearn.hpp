#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "vcle/harness/episodes.hpp"

namespace vcle::harness {

struct QConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double decay_fraction = 0.5;  // of the episode budget

  // Reads q.alpha, q.gamma, q.epsilon_start, q.epsilon_end, q.decay_fraction.
  // Throws BadConfig for other q.* keys or out-of-range values.
  static QConfig from_agent(const std::map<std::string, std::string>& agent);
  double epsilon(int episode, int episodes) const;
};

// Discrete state derived from cartridge RAM.
struct QKey {
  int level = 0;
  int x = 0;
  int y = 0;
  int orientation = 0;
  int keys = 0;
  auto operator<=>(const QKey&) const = default;
};

QKey q_key(const game::RamState& s);

class QTable {
 public:
  using Row = std::array<double, 4>;

  const Row& row(const QKey& k) const;
  Row& row(const QKey& k) { return rows_[k]; }
  // Highest-valued action; ties go to the lowest index.
  int greedy(const QKey& k) const;
  double best(const QKey& k) const;
  std::size_t size() const { return rows_.size(); }

  // One line per state: "level x y orientation keys q0 q1 q2 q3", %.17g.
  std::string serialize() const;
  static QTable parse(std::string_view text);

 private:
  std::map<QKey, Row> rows_;
};

struct TrainResult {
  std::vector<EpisodeLog> log;
  QTable table;
};

// Epsilon-greedy tabular Q-learning. Throws Unsupported for variants whose
// state includes audio.
TrainResult train_q(env::Env& env, const QConfig& cfg, int episodes, std::uint64_t seed,
                    int window = kTrainWindow);

// Fraction of `rows` (from index `from`) that ended in a win.
double win_rate(const std::vector<EpisodeLog>& rows, std::size_t from = 0);

}  // namespace vcle::harness
