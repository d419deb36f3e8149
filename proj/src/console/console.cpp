#include "vcle/console/console.hpp"

#include <algorithm>

#include "vcle/common/error.hpp"

namespace vcle::console {

Console::Console(CartridgeLoader loader) : loader_(std::move(loader)) {}

void Console::require_running() const {
  if (!running_) throw Error(Errc::NotRunning, "console session is not running");
}

void Console::run() {
  if (running_) throw Error(Errc::AlreadyRunning, "console session already active");
  running_ = true;
  frozen_ = false;
  speed_ = 100;
  cart_.reset();
  game_.clear();
  watches_.clear();
  hits_.clear();
  snapshots_.clear();
  reboot();
}

void Console::kill() {
  require_running();
  running_ = false;
  watches_.clear();
  hits_.clear();
  snapshots_.clear();
  cart_.reset();
  game_.clear();
  recording_ = false;
  recorded_.clear();
}

void Console::reboot() {
  ram_.clear();
  frame_counter_ = 0;
  controls_.clear();
  held_ = {};
  delay_until_ = 0;
  recording_ = false;
  recorded_.clear();
  frame_audio_.clear();
  total_samples_ = 0;
  if (cart_) cart_->boot(ram_);
  ram_.write_le32(kFrameCounterAddr, 0);
  fb_dirty_ = true;
  rebaseline_watches();
}

void Console::load_game(const std::string& name) {
  require_running();
  auto cart = loader_ ? loader_(name) : nullptr;
  if (!cart) throw Error(Errc::UnknownGame, name);
  cart_ = std::move(cart);
  game_ = name;
  reboot();
}

void Console::set_frozen(bool frozen) {
  require_running();
  frozen_ = frozen;
}

void Console::set_speed(std::uint32_t percent) {
  require_running();
  if (percent == 0) throw Error(Errc::InvalidSpeed, "speed must be at least 1%");
  speed_ = percent;
}

std::chrono::nanoseconds Console::frame_period() const {
  // 1 / (60 * speed/100) seconds.
  return std::chrono::nanoseconds(static_cast<std::int64_t>(100'000'000'000LL / (kFrameRate * static_cast<std::int64_t>(speed_))));
}

void Console::enqueue(const ControlEvent& ev) {
  require_running();
  controls_.push_back(ev);
}

void Console::apply_due_controls() {
  ButtonSet pressed_now;
  while (!controls_.empty() && delay_until_ <= frame_counter_) {
    const auto ev = controls_.front();
    if (ev.kind == ControlEvent::Kind::Hold) {
      held_.insert(ev.button);
      pressed_now.insert(ev.button);
    } else if (ev.kind == ControlEvent::Kind::Release) {
      // A press is visible for at least one frame.
      if (pressed_now.contains(ev.button)) break;
      held_.erase(ev.button);
    } else {
      controls_.pop_front();
      auto frames = delay_frames(ev.delay_ms);
      if (frames > 0) {
        delay_until_ = frame_counter_ + frames;
        break;
      }
      continue;
    }
    controls_.pop_front();
  }
}

void Console::step_frame() {
  require_running();
  if (frozen_) return;
  apply_due_controls();
  if (cart_) cart_->tick(held_, ram_);

  const auto n = samples_for_frame(frame_counter_);
  frame_audio_.assign(n, 0);
  if (cart_) cart_->mix(frame_audio_);
  if (recording_) recorded_.insert(recorded_.end(), frame_audio_.begin(), frame_audio_.end());
  total_samples_ += n;

  ++frame_counter_;
  ram_.write_le32(kFrameCounterAddr, static_cast<std::uint32_t>(frame_counter_));
  fb_dirty_ = true;
  check_watches();
}

Bytes Console::read_bytes(std::uint32_t addr, std::uint32_t len) const {
  require_running();
  auto v = ram_.view(addr, len);
  return {v.begin(), v.end()};
}

void Console::write_byte(std::uint32_t addr, std::uint8_t value) {
  require_running();
  ram_.write(addr, value);
}

const FrameBuffer& Console::screen() {
  require_running();
  if (fb_dirty_) {
    if (cart_)
      cart_->render(fb_);
    else
      fb_.fill({0, 0, 0});
    fb_dirty_ = false;
  }
  return fb_;
}

void Console::start_audio_recording() {
  require_running();
  if (recording_) throw Error(Errc::AlreadyRecording, "audio recording already active");
  recording_ = true;
  recorded_.clear();
}

std::vector<std::int16_t> Console::stop_audio_recording() {
  require_running();
  if (!recording_) throw Error(Errc::NotRecording, "audio recording was not started");
  recording_ = false;
  return std::exchange(recorded_, {});
}

ConsoleSnapshot Console::capture() {
  require_running();
  ConsoleSnapshot snap;
  auto all = ram_.all();
  snap.ram.assign(all.begin(), all.end());
  snap.framebuffer = screen();
  snap.frame_counter = frame_counter_;
  snap.speed_percent = speed_;
  snap.game = game_;
  if (cart_) snap.cartridge_state = cart_->save_state();
  snap.pending_controls = controls_;
  snap.held = held_;
  snap.delay_until = delay_until_;
  snap.recording = recording_;
  snap.recorded = recorded_;
  return snap;
}

void Console::restore(const ConsoleSnapshot& snap) {
  require_running();
  if (snap.game.empty()) {
    cart_.reset();
  } else if (!cart_ || snap.game != game_) {
    auto cart = loader_ ? loader_(snap.game) : nullptr;
    if (!cart) throw Error(Errc::UnknownGame, snap.game);
    cart_ = std::move(cart);
  }
  game_ = snap.game;
  if (cart_) cart_->load_state(snap.cartridge_state);
  std::copy(snap.ram.begin(), snap.ram.end(), ram_.all().begin());
  fb_ = snap.framebuffer;
  fb_dirty_ = false;
  frame_counter_ = snap.frame_counter;
  speed_ = snap.speed_percent;
  controls_ = snap.pending_controls;
  held_ = snap.held;
  delay_until_ = snap.delay_until;
  recording_ = snap.recording;
  recorded_ = snap.recorded;
  // A load is not a change observed between frames.
  rebaseline_watches();
}

void Console::save_snapshot(const std::string& name) {
  require_running();
  auto snap = capture();
  if (snapshot_dir_) write_snapshot_file(*snapshot_dir_ / (name + ".vcle"), snap);
  snapshots_[name] = std::move(snap);
}

void Console::load_snapshot(const std::string& name) {
  require_running();
  if (auto it = snapshots_.find(name); it != snapshots_.end()) {
    restore(it->second);
    return;
  }
  if (snapshot_dir_) {
    auto path = *snapshot_dir_ / (name + ".vcle");
    if (std::filesystem::exists(path)) {
      restore(read_snapshot_file(path));
      return;
    }
  }
  throw Error(Errc::UnknownState, name);
}

void Console::add_watch(std::uint16_t id, std::uint32_t addr, std::uint16_t len) {
  require_running();
  if (!Ram::in_range(addr, len)) throw Error(Errc::OutOfBounds, "watch region outside RAM");
  auto v = ram_.view(addr, len);
  watches_[id] = MemoryWatch{id, addr, len, true, false, Bytes(v.begin(), v.end())};
}

void Console::clear_watches() {
  require_running();
  watches_.clear();
}

void Console::sleep_watch(std::uint16_t id) {
  require_running();
  auto it = watches_.find(id);
  if (it == watches_.end()) throw Error(Errc::UnknownWatch, std::to_string(id));
  it->second.awake = false;
}

void Console::wake_watch(std::uint16_t id) {
  require_running();
  auto it = watches_.find(id);
  if (it == watches_.end()) throw Error(Errc::UnknownWatch, std::to_string(id));
  auto& w = it->second;
  if (w.awake) return;
  w.awake = true;
  // Changes made while asleep are not reported.
  auto v = ram_.view(w.addr, w.len);
  w.baseline.assign(v.begin(), v.end());
}

void Console::set_watch_break(std::uint16_t id, bool enabled) {
  require_running();
  auto it = watches_.find(id);
  if (it == watches_.end()) throw Error(Errc::UnknownWatch, std::to_string(id));
  it->second.break_on_change = enabled;
}

void Console::rebaseline_watches() {
  for (auto& [id, w] : watches_) {
    auto v = ram_.view(w.addr, w.len);
    w.baseline.assign(v.begin(), v.end());
  }
}

std::size_t Console::check_watches() {
  std::size_t hits = 0;
  for (auto& [id, w] : watches_) {
    if (!w.awake) continue;
    auto now = ram_.view(w.addr, w.len);
    if (std::equal(now.begin(), now.end(), w.baseline.begin(), w.baseline.end())) continue;
    w.baseline.assign(now.begin(), now.end());
    hits_.push_back(WatchHit{id, w.addr, w.baseline});
    ++hits;
    if (w.break_on_change) frozen_ = true;
  }
  return hits;
}

std::vector<WatchHit> Console::take_hits() { return std::exchange(hits_, {}); }

}  // namespace vcle::console
