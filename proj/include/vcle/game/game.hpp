#pragma once

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vcle/client/console_client.hpp"
#include "vcle/dsp/mfcc.hpp"
#include "vcle/game/config.hpp"
#include "vcle/game/processing.hpp"
#include "vcle/kula/cartridge.hpp"

namespace vcle::game {

enum class Action : std::uint8_t { Forward = 0, LookRight = 1, LookLeft = 2, JumpForward = 3 };
inline constexpr std::array<Action, 4> kAllActions = {Action::Forward, Action::LookRight, Action::LookLeft,
                                                      Action::JumpForward};

std::string_view to_string(Action a);
std::optional<Action> action_from_string(std::string_view name);
std::optional<Action> action_from_index(int index);

// None, a trimmed waveform, or its MFCC matrix.
using Sound = std::variant<std::monostate, std::vector<std::int16_t>, dsp::MfccMatrix>;

struct MoveOutcome {
  VisualTensor visual;
  double reward = 0.0;
  bool playing = true;
  double clock = 0.0;  // seconds remaining
  Sound sound;
  double duration_real = 0.0;
  double duration_game = 0.0;
  std::uint32_t score = 0;

  kula::GameStatus status = kula::GameStatus::Playing;
  std::uint32_t score_delta = 0;
};

// The cartridge's RAM block, decoded.
struct RamState {
  std::uint32_t score = 0;
  std::uint32_t clock_frames = 0;
  kula::GameStatus status = kula::GameStatus::Playing;
  bool moving = false;
  int x = 0;
  int y = 0;
  kula::Orientation orientation = kula::Orientation::N;
  int keys_remaining = 0;
  int level = 0;
};

RamState decode_ram_state(std::span<const std::uint8_t> block);

// Console time allowed for one move before it is reported as stuck.
inline constexpr std::uint32_t kStuckFrames = 10 * 60;

// The move-level game abstraction over a console running the Kula cartridge.
// Between moves the console is frozen; a move runs until the moving flag
// falls or the game reaches a terminal status. Not reentrant.
class KulaGame {
 public:
  KulaGame(client::ConsoleClient& console, GameConfig config);
  ~KulaGame();
  KulaGame(const KulaGame&) = delete;
  KulaGame& operator=(const KulaGame&) = delete;

  // Boots the cartridge at a level start and leaves the console frozen.
  void load(const kula::GameName& name);
  // Re-reads bookkeeping after the console state was replaced externally.
  void resync();

  MoveOutcome move(Action action);
  std::vector<Action> move_options() const;

  bool playing() const { return state_.status == kula::GameStatus::Playing; }
  const RamState& state() const { return state_; }
  RamState read_state();
  VisualTensor observe();
  const GameConfig& config() const { return config_; }
  client::ConsoleClient& console() { return console_; }

 private:
  struct Event {
    std::uint16_t id;
    Bytes bytes;
  };

  void install_listeners();
  void send_controls(Action action);
  Event wait_event(std::uint64_t start_frame);
  std::uint64_t frame_counter();
  void step_one_frame(std::uint64_t start_frame);
  std::vector<std::int16_t> finish_recording(std::uint64_t start_frame);

  client::ConsoleClient& console_;
  GameConfig config_;
  RamState state_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Event> events_;
  std::uint16_t moving_watch_ = 0;
  std::uint16_t status_watch_ = 0;
  std::uint16_t frame_watch_ = 0;
};

}  // namespace vcle::game
