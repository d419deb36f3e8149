#include "vcle/kula/engine.hpp"

#include <algorithm>

#include "vcle/common/error.hpp"

namespace vcle::kula {

using console::Button;
using console::ButtonSet;

std::string_view to_string(GameStatus s) {
  switch (s) {
    case GameStatus::Playing: return "playing";
    case GameStatus::Won: return "won";
    case GameStatus::LostFall: return "lost_fall";
    case GameStatus::LostSpike: return "lost_spike";
    case GameStatus::LostTimeout: return "lost_timeout";
  }
  return "?";
}

std::optional<GameStatus> status_from_string(std::string_view name) {
  for (int i = 0; i <= 4; ++i) {
    auto s = static_cast<GameStatus>(i);
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<MoveKind> scan_input(ButtonSet previous, ButtonSet now) {
  auto pressed = [&](Button b) { return now.contains(b) && !previous.contains(b); };
  if (now.contains(Button::Up) && now.contains(Button::Cross) && (pressed(Button::Up) || pressed(Button::Cross)))
    return MoveKind::JumpForward;
  if (pressed(Button::Up)) return MoveKind::Forward;
  if (pressed(Button::Left)) return MoveKind::LookLeft;
  if (pressed(Button::Right)) return MoveKind::LookRight;
  return std::nullopt;
}

Engine::Engine(LevelSpec level, int start, std::optional<std::uint32_t> time_limit_s) : level_(std::move(level)) {
  if (start == kReservedStart) {
    if (!level_.reserved_start) throw Error(Errc::UnknownStart, "level has no reserved start");
    pose_ = *level_.reserved_start;
  } else {
    if (start < 0 || static_cast<std::size_t>(start) >= level_.starts.size())
      throw Error(Errc::UnknownStart, "no start " + std::to_string(start));
    pose_ = level_.starts[static_cast<std::size_t>(start)];
  }
  if (time_limit_s) {
    if (*time_limit_s == 0) throw Error(Errc::BadLevel, "time limit must be positive");
    level_.time_limit_s = *time_limit_s;
  }
  clock_frames_ = level_.time_limit_s * console::kFrameRate;
  for (const auto& [cell, kind] : level_.objects) remaining_.insert(cell);
  keys_remaining_ = static_cast<std::uint8_t>(level_.key_count());
}

PlayerPose Engine::target(MoveKind kind) const {
  PlayerPose p = pose_;
  auto [dx, dy] = forward_delta(p.orientation);
  switch (kind) {
    case MoveKind::LookLeft: p.orientation = rotate_left(p.orientation); break;
    case MoveKind::LookRight: p.orientation = rotate_right(p.orientation); break;
    case MoveKind::Forward: p.x += dx; p.y += dy; break;
    case MoveKind::JumpForward: p.x += 2 * dx; p.y += 2 * dy; break;
  }
  return p;
}

int Engine::planned_duration(MoveKind kind) const {
  if (kind == MoveKind::LookLeft || kind == MoveKind::LookRight) return kRotateFrames;
  int base = kind == MoveKind::Forward ? kForwardFrames : kJumpFrames;
  auto to = target(kind);
  auto tile = level_.tile(to.x, to.y);
  if (tile == Tile::Void) return base + kFallFrames;
  if (tile == Tile::Platform && object_present(to.x, to.y)) return base + kCollectFrames;
  return base;
}

void Engine::start_move(MoveKind kind) {
  Animation a;
  a.kind = kind;
  a.from = pose_;
  a.to = target(kind);
  a.total = planned_duration(kind);
  a.travel = level_.tile(a.to.x, a.to.y) == Tile::Void ? a.total - kFallFrames : a.total;
  anim_ = a;
}

void Engine::finish_move() {
  const Animation a = *anim_;
  anim_.reset();
  pose_ = a.to;
  const bool rotation = a.kind == MoveKind::LookLeft || a.kind == MoveKind::LookRight;
  if (rotation) return;
  switch (level_.tile(pose_.x, pose_.y)) {
    case Tile::Void:
      status_ = GameStatus::LostFall;
      play(SoundEvent::Lose);
      return;
    case Tile::Spike:
      status_ = GameStatus::LostSpike;
      play(SoundEvent::Lose);
      return;
    default: break;
  }
  std::optional<SoundEvent> sound;
  auto it = remaining_.find({pose_.x, pose_.y});
  if (it != remaining_.end()) {
    auto kind = level_.objects.at(*it);
    score_ += score_value(kind);
    if (kind == ObjectKind::Key) --keys_remaining_;
    remaining_.erase(it);
    ++map_revision_;
    sound = kind == ObjectKind::Coin ? SoundEvent::Coin : kind == ObjectKind::Key ? SoundEvent::Key : SoundEvent::Fruit;
  }
  if (level_.tile(pose_.x, pose_.y) == Tile::Goal && keys_remaining_ == 0) {
    status_ = GameStatus::Won;
    sound = SoundEvent::Win;
  }
  if (!sound) sound = a.kind == MoveKind::Forward ? SoundEvent::Roll : SoundEvent::Jump;
  play(*sound);
}

void Engine::play(SoundEvent e) {
  sound_ = e;
  sound_pos_ = 0;
}

void Engine::tick(ButtonSet held) {
  const ButtonSet previous = previous_;
  previous_ = held;
  if (status_ != GameStatus::Playing) return;
  if (clock_frames_ > 0) --clock_frames_;
  if (anim_) {
    if (++anim_->elapsed >= anim_->total) finish_move();
  } else if (auto kind = scan_input(previous, held)) {
    start_move(*kind);
  }
  if (status_ == GameStatus::Playing && clock_frames_ == 0) {
    anim_.reset();
    status_ = GameStatus::LostTimeout;
    play(SoundEvent::Lose);
  }
}

void Engine::mix(std::span<std::int16_t> out) {
  if (!sound_) return;
  const auto& samples = sound_samples(*sound_);
  std::size_t n = std::min(out.size(), samples.size() - sound_pos_);
  for (std::size_t i = 0; i < n; ++i) {
    int v = out[i] + samples[sound_pos_ + i];
    out[i] = static_cast<std::int16_t>(std::clamp(v, -32768, 32767));
  }
  sound_pos_ += n;
  if (sound_pos_ >= samples.size()) sound_.reset();
}

Bytes Engine::save() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(pose_.x)).u32(static_cast<std::uint32_t>(pose_.y)).u8(static_cast<std::uint8_t>(pose_.orientation));
  w.u8(static_cast<std::uint8_t>(status_)).u32(score_).u32(clock_frames_).u8(keys_remaining_);
  w.u32(level_.time_limit_s).u16(previous_.bits()).u32(map_revision_);
  w.u16(static_cast<std::uint16_t>(remaining_.size()));
  for (const auto& c : remaining_) w.u8(static_cast<std::uint8_t>(c.x)).u8(static_cast<std::uint8_t>(c.y));
  w.u8(anim_ ? 1 : 0);
  if (anim_) {
    auto pose = [&](const PlayerPose& p) {
      w.u32(static_cast<std::uint32_t>(p.x)).u32(static_cast<std::uint32_t>(p.y)).u8(static_cast<std::uint8_t>(p.orientation));
    };
    w.u8(static_cast<std::uint8_t>(anim_->kind));
    pose(anim_->from);
    pose(anim_->to);
    w.u32(static_cast<std::uint32_t>(anim_->total)).u32(static_cast<std::uint32_t>(anim_->elapsed)).u32(static_cast<std::uint32_t>(anim_->travel));
  }
  w.u8(sound_ ? 1 : 0);
  if (sound_) w.u8(static_cast<std::uint8_t>(*sound_)).u32(static_cast<std::uint32_t>(sound_pos_));
  return std::move(w).take();
}

void Engine::load(std::span<const std::uint8_t> blob) {
  try {
    ByteReader r(blob);
    auto read_pose = [&] {
      PlayerPose p;
      p.x = static_cast<std::int32_t>(r.u32());
      p.y = static_cast<std::int32_t>(r.u32());
      p.orientation = static_cast<Orientation>(r.u8() & 3);
      return p;
    };
    PlayerPose pose = read_pose();
    auto status = r.u8();
    if (status > 4) throw Error(Errc::BadSnapshot, "bad status");
    auto score = r.u32();
    auto clock = r.u32();
    auto keys = r.u8();
    auto time_limit = r.u32();
    auto previous = ButtonSet::from_bits(r.u16());
    auto revision = r.u32();
    std::set<Cell> remaining;
    for (auto n = r.u16(); n > 0; --n) {
      Cell c{r.u8(), 0};
      c.y = r.u8();
      if (!level_.objects.count(c)) throw Error(Errc::BadSnapshot, "object not in level");
      remaining.insert(c);
    }
    std::optional<Animation> anim;
    if (r.u8()) {
      Animation a;
      auto kind = r.u8();
      if (kind > 3) throw Error(Errc::BadSnapshot, "bad move kind");
      a.kind = static_cast<MoveKind>(kind);
      a.from = read_pose();
      a.to = read_pose();
      a.total = static_cast<int>(r.u32());
      a.elapsed = static_cast<int>(r.u32());
      a.travel = static_cast<int>(r.u32());
      anim = a;
    }
    std::optional<SoundEvent> sound;
    std::size_t sound_pos = 0;
    if (r.u8()) {
      auto e = r.u8();
      if (e >= kAllSounds.size()) throw Error(Errc::BadSnapshot, "bad sound");
      sound = static_cast<SoundEvent>(e);
      sound_pos = r.u32();
      if (sound_pos > sound_samples(*sound).size()) throw Error(Errc::BadSnapshot, "bad sound position");
    }
    pose_ = pose;
    status_ = static_cast<GameStatus>(status);
    score_ = score;
    clock_frames_ = clock;
    keys_remaining_ = keys;
    level_.time_limit_s = time_limit;
    previous_ = previous;
    map_revision_ = revision;
    remaining_ = std::move(remaining);
    anim_ = anim;
    sound_ = sound;
    sound_pos_ = sound_pos;
  } catch (const Error& e) {
    if (e.code() == Errc::BadSnapshot) throw;
    throw Error(Errc::BadSnapshot, std::string("cartridge state: ") + e.what());
  }
}

}  // namespace vcle::kula
