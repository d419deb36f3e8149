#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcle/common/bytes.hpp"
#include "vcle/console/cartridge.hpp"
#include "vcle/console/memory.hpp"
#include "vcle/console/snapshot.hpp"
#include "vcle/console/types.hpp"

namespace vcle::console {

struct MemoryWatch {
  std::uint16_t id = 0;
  std::uint32_t addr = 0;
  std::uint16_t len = 0;
  bool awake = true;
  // Freeze the console at the end of any frame in which this watch fires.
  bool break_on_change = false;
  Bytes baseline;
};

struct WatchHit {
  std::uint16_t id = 0;
  std::uint32_t addr = 0;
  Bytes bytes;  // new contents of the whole region
};

// Deterministic frame-stepped virtual console. Not thread-safe: one owner
// (normally ipc::ConsoleServer) drives it from a single context.
class Console {
 public:
  explicit Console(CartridgeLoader loader);

  // Session lifecycle.
  void run();
  void kill();
  bool running() const { return running_; }

  void load_game(const std::string& name);
  const std::string& game() const { return game_; }

  void set_frozen(bool frozen);
  bool frozen() const { return frozen_; }

  void set_speed(std::uint32_t percent);
  std::uint32_t speed() const { return speed_; }
  // Target wall-clock duration of one frame at the current speed.
  std::chrono::nanoseconds frame_period() const;

  void enqueue(const ControlEvent& ev);
  ButtonSet held() const { return held_; }
  std::size_t pending_controls() const { return controls_.size(); }

  // One frame: due controls, cartridge tick, audio, watches. No-op while frozen.
  void step_frame();
  std::uint64_t frame_counter() const { return frame_counter_; }

  Bytes read_bytes(std::uint32_t addr, std::uint32_t len) const;
  void write_byte(std::uint32_t addr, std::uint8_t value);
  const Ram& ram() const { return ram_; }

  const FrameBuffer& screen();

  void start_audio_recording();
  std::vector<std::int16_t> stop_audio_recording();
  bool recording() const { return recording_; }
  std::uint64_t total_audio_samples() const { return total_samples_; }
  // Samples produced by the most recent frame.
  std::span<const std::int16_t> last_frame_audio() const { return frame_audio_; }

  void save_snapshot(const std::string& name);
  void load_snapshot(const std::string& name);
  // Also persist snapshots as <dir>/<name>.vcle and fall back to them on load.
  void set_snapshot_dir(std::optional<std::filesystem::path> dir) { snapshot_dir_ = std::move(dir); }
  ConsoleSnapshot capture();
  void restore(const ConsoleSnapshot& snap);

  void add_watch(std::uint16_t id, std::uint32_t addr, std::uint16_t len);
  void clear_watches();
  void sleep_watch(std::uint16_t id);
  void wake_watch(std::uint16_t id);
  void set_watch_break(std::uint16_t id, bool enabled);
  bool has_watch(std::uint16_t id) const { return watches_.count(id) != 0; }

  // Byte-compare every awake watch against its baseline. Returns the number of
  // hits appended to the pending queue; break watches freeze the console.
  std::size_t check_watches();
  std::vector<WatchHit> take_hits();

 private:
  void require_running() const;
  void apply_due_controls();
  void rebaseline_watches();
  void reboot();

  CartridgeLoader loader_;
  bool running_ = false;
  bool frozen_ = false;
  std::uint32_t speed_ = 100;

  Ram ram_;
  FrameBuffer fb_;
  bool fb_dirty_ = true;
  std::unique_ptr<Cartridge> cart_;
  std::string game_;

  std::uint64_t frame_counter_ = 0;
  std::deque<ControlEvent> controls_;
  ButtonSet held_;
  std::uint64_t delay_until_ = 0;

  bool recording_ = false;
  std::vector<std::int16_t> recorded_;
  std::vector<std::int16_t> frame_audio_;
  std::uint64_t total_samples_ = 0;

  std::map<std::uint16_t, MemoryWatch> watches_;
  std::vector<WatchHit> hits_;

  std::map<std::string, ConsoleSnapshot> snapshots_;
  std::optional<std::filesystem::path> snapshot_dir_;
};

}  // namespace vcle::console
