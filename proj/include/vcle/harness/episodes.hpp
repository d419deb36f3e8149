#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vcle/env/env.hpp"

namespace vcle::harness {

struct EpisodeLog {
  int episode = 0;
  double reward = 0.0;
  int moves = 0;
  std::string outcome;  // GameStatus name
  double wall_s = 0.0;
  std::string level;
  int start = 0;
  double moving_avg = 0.0;
};

// Mean of the last `window` values ending at each index; the first rows
// average whatever is available.
std::vector<double> moving_average(const std::vector<double>& values, int window);
// Fills moving_avg from the reward column.
void fill_moving_average(std::vector<EpisodeLog>& rows, int window);

inline constexpr int kTrainWindow = 10;
inline constexpr int kEvalWindow = 5;

// Header `episode,reward,moves,outcome,wall_s,level,start,moving_avg`.
void write_episode_csv(std::ostream& out, const std::vector<EpisodeLog>& rows);

// Action names or indices separated by commas, whitespace or newlines; '#'
// starts a comment. Throws ScriptError.
std::vector<game::Action> parse_script(std::string_view text);
std::vector<game::Action> load_script(const std::filesystem::path& path);

struct PlayOptions {
  int episodes = 10;
  std::uint64_t seed = 0;
  // Replayed cyclically each episode; random uniform actions when absent.
  std::optional<std::vector<game::Action>> script;
  int window = kTrainWindow;
};

std::vector<EpisodeLog> play(env::Env& env, const PlayOptions& options);

}  // namespace vcle::harness
