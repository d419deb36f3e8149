#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vcle/kula/engine.hpp"

namespace vcle::game {

struct RewardConfig {
  std::map<std::uint32_t, double> score_to_reward = {{0, 0.0}, {250, 0.2}, {1000, 0.4}, {2500, 0.6}};
  double win_reward = 1.0;
  double lose_reward = -1.0;
  std::optional<double> lose_fall;
  std::optional<double> lose_spike;
  std::optional<double> lose_timeout;
  double step_cost = 0.01;
  bool time_in_state = false;

  // Largest configured score change not above `delta`.
  double reward_for_score(std::uint32_t delta) const;
  double terminal_reward(kula::GameStatus status) const;
  // Throws BadConfig when score_to_reward is not non-decreasing.
  void validate() const;
};

struct AudioPolicy {
  bool record = false;
  bool use_mfcc = false;
  double silence_threshold = 0.001;  // fraction of full scale
  double max_record_s = 3.0;
};

struct GameConfig {
  RewardConfig reward;
  AudioPolicy audio;
  int visual_size = 84;
  // Keys under "q." are kept verbatim for the learning harness.
  std::map<std::string, std::string> agent;
};

// Plain-text "key = value" lines; '#' starts a comment. Throws BadConfig.
GameConfig parse_config(std::string_view text, GameConfig base = {});
GameConfig load_config(const std::filesystem::path& path, GameConfig base = {});
std::string format_config(const GameConfig& cfg);

}  // namespace vcle::game
