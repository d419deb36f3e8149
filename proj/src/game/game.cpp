#include "vcle/game/game.hpp"

#include <chrono>

#include "vcle/common/error.hpp"

namespace vcle::game {

using console::Button;
using Clock = std::chrono::steady_clock;

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Forward: return "Forward";
    case Action::LookRight: return "LookRight";
    case Action::LookLeft: return "LookLeft";
    case Action::JumpForward: return "JumpForward";
  }
  return "?";
}

std::optional<Action> action_from_string(std::string_view name) {
  for (auto a : kAllActions)
    if (to_string(a) == name) return a;
  return std::nullopt;
}

std::optional<Action> action_from_index(int index) {
  if (index < 0 || index >= static_cast<int>(kAllActions.size())) return std::nullopt;
  return kAllActions[static_cast<std::size_t>(index)];
}

RamState decode_ram_state(std::span<const std::uint8_t> b) {
  if (b.size() < kula::ram::kBlockSize) throw Error(Errc::BadFrame, "short cartridge RAM block");
  RamState s;
  s.score = load_le32(b.data() + 0x00);
  s.clock_frames = load_le32(b.data() + 0x04);
  if (b[0x08] > 4) throw Error(Errc::BadFrame, "bad status byte");
  s.status = static_cast<kula::GameStatus>(b[0x08]);
  s.moving = b[0x09] != 0;
  s.x = static_cast<std::int8_t>(b[0x0A]);
  s.y = static_cast<std::int8_t>(b[0x0B]);
  s.orientation = static_cast<kula::Orientation>(b[0x0C] & 3);
  s.keys_remaining = b[0x0D];
  s.level = b[0x0E];
  return s;
}

KulaGame::KulaGame(client::ConsoleClient& console, GameConfig config)
    : console_(console), config_(std::move(config)) {
  config_.reward.validate();
}

KulaGame::~KulaGame() {
  try {
    if (console_.running()) {
      console_.clear_memory_listeners();
      console_.flush_notifications();
    }
  } catch (...) {
  }
}

void KulaGame::install_listeners() {
  auto push = [this](const client::MemoryChange& m) {
    std::lock_guard lock(mu_);
    events_.push_back({m.id, m.bytes});
    cv_.notify_all();
  };
  moving_watch_ = console_.add_memory_listener(kula::ram::kMoving, 1, push);
  console_.set_listener_break(moving_watch_, true);
  status_watch_ = console_.add_memory_listener(kula::ram::kStatus, 1, push);
  console_.set_listener_break(status_watch_, true);
  frame_watch_ = console_.add_memory_listener(console::kFrameCounterAddr, 4, push);
  console_.set_listener_break(frame_watch_, true);
  console_.sleep_memory_listener(frame_watch_);
}

void KulaGame::load(const kula::GameName& name) {
  console_.freeze();
  console_.clear_memory_listeners();
  console_.load_game(kula::format_game_name(name));
  install_listeners();
  resync();
}

void KulaGame::resync() {
  console_.flush_notifications();
  {
    std::lock_guard lock(mu_);
    events_.clear();
  }
  state_ = read_state();
}

RamState KulaGame::read_state() {
  return decode_ram_state(console_.read_bytes(kula::ram::kBase, kula::ram::kBlockSize));
}

std::uint64_t KulaGame::frame_counter() {
  auto b = console_.read_bytes(console::kFrameCounterAddr, 4);
  return load_le32(b.data());
}

VisualTensor KulaGame::observe() {
  auto screen = console_.get_screen();
  return process_frame(screen.rgb, screen.width, screen.height, config_.visual_size);
}

std::vector<Action> KulaGame::move_options() const {
  if (!playing()) throw Error(Errc::EpisodeOver, "episode is over");
  return {kAllActions.begin(), kAllActions.end()};
}

void KulaGame::send_controls(Action action) {
  switch (action) {
    case Action::Forward: console_.touch_button(Button::Up); break;
    case Action::LookLeft: console_.touch_button(Button::Left); break;
    case Action::LookRight: console_.touch_button(Button::Right); break;
    case Action::JumpForward:
      console_.hold_button(Button::Cross);
      console_.hold_button(Button::Up);
      console_.delay_button(50);
      console_.release_button(Button::Cross);
      console_.release_button(Button::Up);
      break;
  }
}

KulaGame::Event KulaGame::wait_event(std::uint64_t start_frame) {
  for (;;) {
    {
      std::unique_lock lock(mu_);
      if (cv_.wait_for(lock, std::chrono::milliseconds(100), [&] { return !events_.empty(); })) {
        auto ev = std::move(events_.front());
        events_.pop_front();
        return ev;
      }
    }
    if (!console_.running()) throw Error(Errc::NotRunning, "console stopped during a move");
    if (frame_counter() - start_frame > kStuckFrames) {
      console_.freeze();
      throw Error(Errc::StuckMove, "move did not complete within 10 s of game time");
    }
  }
}

void KulaGame::step_one_frame(std::uint64_t start_frame) {
  console_.wake_memory_listener(frame_watch_);
  console_.unfreeze();
  for (;;) {
    auto ev = wait_event(start_frame);
    if (ev.id == frame_watch_) break;
  }
  // Every watch breaks, so the console is frozen again; collect the rest of
  // this frame's notifications before moving on.
  console_.flush_notifications();
  console_.sleep_memory_listener(frame_watch_);
  std::lock_guard lock(mu_);
  events_.clear();
}

std::vector<std::int16_t> KulaGame::finish_recording(std::uint64_t start_frame) {
  const auto& policy = config_.audio;
  const auto max_samples = static_cast<std::size_t>(policy.max_record_s * console::kSampleRate);
  const std::size_t frame_samples = console::kSampleRate / console::kFrameRate;
  const double limit = policy.silence_threshold * 32768.0;
  auto samples = console_.stop_recording_audio().samples;
  auto tail_sounding = [&] {
    if (samples.empty()) return false;
    const std::size_t from = samples.size() > frame_samples ? samples.size() - frame_samples : 0;
    for (std::size_t i = from; i < samples.size(); ++i)
      if (std::abs(static_cast<int>(samples[i])) > limit) return true;
    return false;
  };
  while (samples.size() < max_samples && tail_sounding()) {
    console_.start_recording_audio();
    step_one_frame(start_frame);
    auto more = console_.stop_recording_audio().samples;
    samples.insert(samples.end(), more.begin(), more.end());
  }
  return samples;
}

MoveOutcome KulaGame::move(Action action) {
  if (!playing()) throw Error(Errc::EpisodeOver, "episode is over");
  console_.flush_notifications();
  {
    std::lock_guard lock(mu_);
    events_.clear();
  }
  const RamState before = read_state();
  const std::uint64_t start_frame = frame_counter();
  const auto t0 = Clock::now();
  const bool record = config_.audio.record;
  if (record) console_.start_recording_audio();

  send_controls(action);
  console_.unfreeze();
  bool done = false;
  while (!done) {
    auto first = wait_event(start_frame);
    // The watch that fired froze the console at the end of its frame.
    console_.flush_notifications();
    std::vector<Event> batch{std::move(first)};
    {
      std::lock_guard lock(mu_);
      while (!events_.empty()) {
        batch.push_back(std::move(events_.front()));
        events_.pop_front();
      }
    }
    for (const auto& ev : batch) {
      if (ev.id == moving_watch_ && !ev.bytes.empty() && ev.bytes[0] == 0) done = true;
      if (ev.id == status_watch_ && !ev.bytes.empty() && ev.bytes[0] != 0) done = true;
    }
    if (!done) console_.unfreeze();
  }

  Sound sound;
  if (record) {
    auto trimmed = trim_silence(finish_recording(start_frame), config_.audio.silence_threshold);
    if (config_.audio.use_mfcc)
      sound = dsp::mfcc(std::span<const std::int16_t>(trimmed));
    else
      sound = std::move(trimmed);
  }
  console_.flush_notifications();
  {
    std::lock_guard lock(mu_);
    events_.clear();
  }

  MoveOutcome out;
  const RamState after = read_state();
  out.visual = observe();
  out.duration_real = std::chrono::duration<double>(Clock::now() - t0).count();
  out.status = after.status;
  out.playing = after.status == kula::GameStatus::Playing;
  out.score = after.score;
  out.score_delta = after.score - before.score;
  out.clock = after.clock_frames / static_cast<double>(console::kFrameRate);
  out.duration_game = (before.clock_frames - after.clock_frames) / static_cast<double>(console::kFrameRate);
  out.reward = out.playing ? config_.reward.reward_for_score(out.score_delta) - config_.reward.step_cost
                           : config_.reward.terminal_reward(after.status);
  out.sound = std::move(sound);
  state_ = after;
  return out;
}

}  // namespace vcle::game
