#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "vcle/common/bytes.hpp"
#include "vcle/console/types.hpp"
#include "vcle/kula/level.hpp"
#include "vcle/kula/synth.hpp"

namespace vcle::kula {

enum class GameStatus : std::uint8_t { Playing = 0, Won = 1, LostFall = 2, LostSpike = 3, LostTimeout = 4 };

std::string_view to_string(GameStatus s);
std::optional<GameStatus> status_from_string(std::string_view name);
inline bool is_terminal(GameStatus s) { return s != GameStatus::Playing; }

enum class MoveKind : std::uint8_t { Forward, LookLeft, LookRight, JumpForward };

inline constexpr int kRotateFrames = 15;
inline constexpr int kForwardFrames = 30;
inline constexpr int kJumpFrames = 75;
inline constexpr int kCollectFrames = 15;  // added when the move collects an object
inline constexpr int kFallFrames = 90;     // added when the move ends over void

// Selects a level start; kReservedStart picks the validation start.
inline constexpr int kReservedStart = -1;

// Edge-triggered input decode. Cross alone and Down do nothing.
std::optional<MoveKind> scan_input(console::ButtonSet previous, console::ButtonSet now);

struct Animation {
  MoveKind kind = MoveKind::Forward;
  PlayerPose from;
  PlayerPose to;
  int total = 0;    // frames with moving=1
  int elapsed = 0;  // frames already played
  int travel = 0;   // frames before the fall phase begins
};

// The Kula game rules, one tick per console frame.
class Engine {
 public:
  Engine(LevelSpec level, int start, std::optional<std::uint32_t> time_limit_s = std::nullopt);

  void tick(console::ButtonSet held);
  // Adds the active sound's next samples into `out`.
  void mix(std::span<std::int16_t> out);

  const LevelSpec& level() const { return level_; }
  const PlayerPose& pose() const { return pose_; }
  GameStatus status() const { return status_; }
  std::uint32_t score() const { return score_; }
  std::uint32_t clock_frames() const { return clock_frames_; }
  bool moving() const { return anim_.has_value(); }
  std::uint8_t keys_remaining() const { return keys_remaining_; }
  bool object_present(int x, int y) const { return remaining_.count({x, y}) != 0; }
  const std::optional<Animation>& animation() const { return anim_; }
  std::optional<SoundEvent> active_sound() const { return sound_; }
  // Incremented whenever the tile map changes.
  std::uint32_t map_revision() const { return map_revision_; }

  // Duration in frames the move would take from the current state.
  int planned_duration(MoveKind kind) const;

  Bytes save() const;
  void load(std::span<const std::uint8_t> blob);

 private:
  PlayerPose target(MoveKind kind) const;
  void start_move(MoveKind kind);
  void finish_move();
  void play(SoundEvent e);

  LevelSpec level_;
  PlayerPose pose_;
  GameStatus status_ = GameStatus::Playing;
  std::uint32_t score_ = 0;
  std::uint32_t clock_frames_ = 0;
  std::uint8_t keys_remaining_ = 0;
  std::set<Cell> remaining_;
  std::optional<Animation> anim_;
  console::ButtonSet previous_;
  std::optional<SoundEvent> sound_;
  std::size_t sound_pos_ = 0;
  std::uint32_t map_revision_ = 0;
};

}  // namespace vcle::kula
