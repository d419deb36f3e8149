#include "vcle/game/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vcle/common/error.hpp"

namespace vcle::game {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  std::string s(v);
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(d))
    throw Error(Errc::BadConfig, std::string(key) + ": expected a number, got '" + s + "'");
  return d;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(Errc::BadConfig, std::string(key) + ": expected true/false, got '" + std::string(v) + "'");
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

double RewardConfig::reward_for_score(std::uint32_t delta) const {
  auto it = score_to_reward.upper_bound(delta);
  if (it == score_to_reward.begin()) return 0.0;
  return std::prev(it)->second;
}

double RewardConfig::terminal_reward(kula::GameStatus status) const {
  switch (status) {
    case kula::GameStatus::Won: return win_reward;
    case kula::GameStatus::LostFall: return lose_fall.value_or(lose_reward);
    case kula::GameStatus::LostSpike: return lose_spike.value_or(lose_reward);
    case kula::GameStatus::LostTimeout: return lose_timeout.value_or(lose_reward);
    case kula::GameStatus::Playing: break;
  }
  return 0.0;
}

void RewardConfig::validate() const {
  double prev = -INFINITY;
  for (const auto& [delta, r] : score_to_reward) {
    if (r < prev) throw Error(Errc::BadConfig, "reward.score values must be non-decreasing in score change");
    prev = r;
  }
  if (step_cost < 0) throw Error(Errc::BadConfig, "reward.step_cost must be non-negative");
}

GameConfig parse_config(std::string_view text, GameConfig cfg) {
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::BadConfig, "line " + std::to_string(line_no) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    auto& r = cfg.reward;
    auto& a = cfg.audio;
    if (key.substr(0, 13) == "reward.score.") {
      std::uint32_t delta = 0;
      auto digits = key.substr(13);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), delta);
      if (ec != std::errc{} || p != digits.data() + digits.size() || digits.empty())
        throw Error(Errc::BadConfig, "bad score change in '" + std::string(key) + "'");
      r.score_to_reward[delta] = to_double(key, value);
    } else if (key == "reward.win") {
      r.win_reward = to_double(key, value);
    } else if (key == "reward.lose") {
      r.lose_reward = to_double(key, value);
    } else if (key == "reward.lose.fall") {
      r.lose_fall = to_double(key, value);
    } else if (key == "reward.lose.spike") {
      r.lose_spike = to_double(key, value);
    } else if (key == "reward.lose.timeout") {
      r.lose_timeout = to_double(key, value);
    } else if (key == "reward.step_cost") {
      r.step_cost = to_double(key, value);
    } else if (key == "state.time_in_state") {
      r.time_in_state = to_bool(key, value);
    } else if (key == "audio.record") {
      a.record = to_bool(key, value);
    } else if (key == "audio.use_mfcc") {
      a.use_mfcc = to_bool(key, value);
    } else if (key == "audio.silence_threshold") {
      a.silence_threshold = to_double(key, value);
      if (a.silence_threshold < 0 || a.silence_threshold >= 1) throw Error(Errc::BadConfig, "audio.silence_threshold must be in [0, 1)");
    } else if (key == "audio.max_record_s") {
      a.max_record_s = to_double(key, value);
      if (a.max_record_s <= 0) throw Error(Errc::BadConfig, "audio.max_record_s must be positive");
    } else if (key == "visual.size") {
      auto v = to_double(key, value);
      if (v < 1 || v > 240 || v != std::floor(v)) throw Error(Errc::BadConfig, "visual.size must be an integer in 1..240");
      cfg.visual_size = static_cast<int>(v);
    } else if (key.substr(0, 2) == "q.") {
      cfg.agent[std::string(key)] = std::string(value);
    } else {
      throw Error(Errc::BadConfig, "unknown key '" + std::string(key) + "'");
    }
  }
  cfg.reward.validate();
  return cfg;
}

GameConfig load_config(const std::filesystem::path& path, GameConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

std::string format_config(const GameConfig& cfg) {
  std::ostringstream out;
  const auto& r = cfg.reward;
  for (const auto& [delta, v] : r.score_to_reward) out << "reward.score." << delta << " = " << fmt(v) << "\n";
  out << "reward.win = " << fmt(r.win_reward) << "\n";
  out << "reward.lose = " << fmt(r.lose_reward) << "\n";
  if (r.lose_fall) out << "reward.lose.fall = " << fmt(*r.lose_fall) << "\n";
  if (r.lose_spike) out << "reward.lose.spike = " << fmt(*r.lose_spike) << "\n";
  if (r.lose_timeout) out << "reward.lose.timeout = " << fmt(*r.lose_timeout) << "\n";
  out << "reward.step_cost = " << fmt(r.step_cost) << "\n";
  out << "state.time_in_state = " << (r.time_in_state ? "true" : "false") << "\n";
  out << "audio.record = " << (cfg.audio.record ? "true" : "false") << "\n";
  out << "audio.use_mfcc = " << (cfg.audio.use_mfcc ? "true" : "false") << "\n";
  out << "audio.silence_threshold = " << fmt(cfg.audio.silence_threshold) << "\n";
  out << "audio.max_record_s = " << fmt(cfg.audio.max_record_s) << "\n";
  out << "visual.size = " << cfg.visual_size << "\n";
  for (const auto& [k, v] : cfg.agent) out << k << " = " << v << "\n";
  return out.str();
}

}  // namespace vcle::game
