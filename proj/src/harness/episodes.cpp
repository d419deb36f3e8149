#include "vcle/harness/episodes.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vcle/common/error.hpp"

namespace vcle::harness {

std::vector<double> moving_average(const std::vector<double>& values, int window) {
  if (window < 1) throw Error(Errc::BadConfig, "moving-average window must be positive");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t from = i + 1 >= static_cast<std::size_t>(window) ? i + 1 - static_cast<std::size_t>(window) : 0;
    double sum = 0.0;
    for (std::size_t j = from; j <= i; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(i + 1 - from);
  }
  return out;
}

void fill_moving_average(std::vector<EpisodeLog>& rows, int window) {
  std::vector<double> rewards;
  for (const auto& r : rows) rewards.push_back(r.reward);
  auto avg = moving_average(rewards, window);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].moving_avg = avg[i];
}

void write_episode_csv(std::ostream& out, const std::vector<EpisodeLog>& rows) {
  out << "episode,reward,moves,outcome,wall_s,level,start,moving_avg\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%s,%.3f,%s,%d,%.17g\n", r.episode, r.reward, r.moves, r.outcome.c_str(),
                  r.wall_s, r.level.c_str(), r.start, r.moving_avg);
    out << buf;
  }
}

std::vector<game::Action> parse_script(std::string_view text) {
  std::vector<game::Action> actions;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    auto a = game::action_from_string(token);
    if (!a && token.size() == 1 && token[0] >= '0' && token[0] <= '9') a = game::action_from_index(token[0] - '0');
    if (!a) throw Error(Errc::ScriptError, "unknown action '" + token + "'");
    actions.push_back(*a);
    token.clear();
  };
  bool comment = false;
  for (char ch : text) {
    if (ch == '\n') comment = false;
    if (comment) continue;
    if (ch == '#') {
      flush();
      comment = true;
    } else if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  if (actions.empty()) throw Error(Errc::ScriptError, "script has no actions");
  return actions;
}

std::vector<game::Action> load_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ScriptError, "cannot read script " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_script(text.str());
}

std::vector<EpisodeLog> play(env::Env& env, const PlayOptions& options) {
  Rng rng(options.seed);
  std::vector<EpisodeLog> rows;
  for (int ep = 0; ep < options.episodes; ++ep) {
    const auto t0 = std::chrono::steady_clock::now();
    env.reset(ep == 0 ? std::optional<std::uint64_t>(options.seed) : std::nullopt);
    EpisodeLog row;
    row.episode = ep;
    row.level = env.current().level;
    row.start = env.current().start;
    std::size_t i = 0;
    for (;;) {
      int action = options.script ? static_cast<int>((*options.script)[i++ % options.script->size()])
                                  : static_cast<int>(uniform_index(rng, game::kAllActions.size()));
      auto r = env.step(action);
      row.reward += r.reward;
      ++row.moves;
      if (r.done) {
        row.outcome = r.info.cause;
        break;
      }
    }
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
  }
  fill_moving_average(rows, options.window);
  return rows;
}

}  // namespace vcle::harness
