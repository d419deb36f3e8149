#include "vcle/harness/qlearn.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "vcle/common/error.hpp"

namespace vcle::harness {

namespace {

double number(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw Error(Errc::BadConfig, key + ": expected a number");
  return d;
}

}  // namespace

QConfig QConfig::from_agent(const std::map<std::string, std::string>& agent) {
  QConfig c;
  for (const auto& [k, v] : agent) {
    if (k == "q.alpha") c.alpha = number(k, v);
    else if (k == "q.gamma") c.gamma = number(k, v);
    else if (k == "q.epsilon_start") c.epsilon_start = number(k, v);
    else if (k == "q.epsilon_end") c.epsilon_end = number(k, v);
    else if (k == "q.decay_fraction") c.decay_fraction = number(k, v);
    else throw Error(Errc::BadConfig, "unknown key '" + k + "'");
  }
  if (c.alpha <= 0 || c.alpha > 1) throw Error(Errc::BadConfig, "q.alpha must be in (0, 1]");
  if (c.gamma < 0 || c.gamma >= 1) throw Error(Errc::BadConfig, "q.gamma must be in [0, 1)");
  if (c.epsilon_start < 0 || c.epsilon_start > 1 || c.epsilon_end < 0 || c.epsilon_end > 1)
    throw Error(Errc::BadConfig, "epsilon values must be in [0, 1]");
  if (c.decay_fraction <= 0 || c.decay_fraction > 1) throw Error(Errc::BadConfig, "q.decay_fraction must be in (0, 1]");
  return c;
}

double QConfig::epsilon(int episode, int episodes) const {
  const double span = decay_fraction * episodes;
  if (span <= 0 || episode >= span) return epsilon_end;
  return epsilon_start + (epsilon_end - epsilon_start) * (episode / span);
}

QKey q_key(const game::RamState& s) {
  return {s.level, s.x, s.y, static_cast<int>(s.orientation), s.keys_remaining};
}

const QTable::Row& QTable::row(const QKey& k) const {
  static const Row zero{};
  auto it = rows_.find(k);
  return it == rows_.end() ? zero : it->second;
}

int QTable::greedy(const QKey& k) const {
  const auto& r = row(k);
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

double QTable::best(const QKey& k) const {
  const auto& r = row(k);
  return *std::max_element(r.begin(), r.end());
}

std::string QTable::serialize() const {
  std::string out;
  char buf[512];
  for (const auto& [k, r] : rows_) {
    std::snprintf(buf, sizeof buf, "%d %d %d %d %d %.17g %.17g %.17g %.17g\n", k.level, k.x, k.y, k.orientation, k.keys,
                  r[0], r[1], r[2], r[3]);
    out += buf;
  }
  return out;
}

QTable QTable::parse(std::string_view text) {
  QTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    QKey k;
    Row r;
    if (!(ls >> k.level >> k.x >> k.y >> k.orientation >> k.keys >> r[0] >> r[1] >> r[2] >> r[3]))
      throw Error(Errc::BadConfig, "bad Q-table line: " + line);
    t.rows_[k] = r;
  }
  return t;
}

TrainResult train_q(env::Env& env, const QConfig& cfg, int episodes, std::uint64_t seed, int window) {
  if (env.variant().encoding != env::Encoding::Visual)
    throw Error(Errc::Unsupported, "tabular Q-learning does not cover " + env.variant().name);
  Rng rng(seed);
  TrainResult result;
  auto& q = result.table;
  for (int ep = 0; ep < episodes; ++ep) {
    const auto t0 = std::chrono::steady_clock::now();
    env.reset(ep == 0 ? std::optional<std::uint64_t>(seed) : std::nullopt);
    const double eps = cfg.epsilon(ep, episodes);
    EpisodeLog row;
    row.episode = ep;
    row.level = env.current().level;
    row.start = env.current().start;
    QKey s = q_key(env.game().state());
    for (;;) {
      int a = uniform_unit(rng) < eps ? static_cast<int>(uniform_index(rng, 4)) : q.greedy(s);
      auto r = env.step(a);
      QKey next = q_key(env.game().state());
      const double target = r.reward + (r.done ? 0.0 : cfg.gamma * q.best(next));
      auto& cell = q.row(s)[static_cast<std::size_t>(a)];
      cell += cfg.alpha * (target - cell);
      row.reward += r.reward;
      ++row.moves;
      s = next;
      if (r.done) {
        row.outcome = r.info.cause;
        break;
      }
    }
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.log.push_back(row);
  }
  fill_moving_average(result.log, window);
  return result;
}

double win_rate(const std::vector<EpisodeLog>& rows, std::size_t from) {
  if (from >= rows.size()) return 0.0;
  std::size_t wins = 0;
  for (std::size_t i = from; i < rows.size(); ++i) wins += rows[i].outcome == "won";
  return static_cast<double>(wins) / static_cast<double>(rows.size() - from);
}

}  // namespace vcle::harness
