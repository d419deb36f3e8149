#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vcle/client/console_client.hpp"
#include "vcle/common/rng.hpp"
#include "vcle/game/game.hpp"

namespace vcle::env {

enum class StartPolicy { Fixed, UniformTraining };
enum class Encoding { Visual, Composite };

struct EnvVariant {
  std::string name;
  std::vector<kula::GameName> training;  // candidate level/start pairs
  StartPolicy start_policy = StartPolicy::Fixed;
  std::optional<kula::GameName> reserved;  // used instead in eval mode
  Encoding encoding = Encoding::Visual;
};

inline constexpr std::uint32_t kRandomTimeLimitS = 80;

// Builds fixed-v1, random-v1 or audio-v1. `level`/`start` select the single
// start of the fixed variants. Throws BadConfig for an unknown name.
EnvVariant make_variant(const std::string& name, const std::string& level = "level1", int start = 0);

// Visual tensor, plus the optional parts the variant encodes.
struct EncodedState {
  game::VisualTensor visual;
  std::optional<game::Sound> sound;
  std::optional<double> clock;  // seconds remaining
  std::optional<std::uint32_t> score;
};

std::uint64_t state_hash(const EncodedState& s);

struct StepInfo {
  double duration_real = 0.0;  // wall clock, excluded from determinism checks
  double duration_game = 0.0;
  std::uint32_t score = 0;
  double clock = 0.0;
  std::string cause;  // GameStatus name; "playing" while the episode runs
  std::string level;
  int start = 0;
};

struct StepResult {
  EncodedState state;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

struct StateKey {
  std::string id;
};

struct EnvOptions {
  std::string variant = "fixed-v1";
  std::string level = "level1";
  int start = 0;
  bool eval = false;
  game::GameConfig config;
  client::ConsoleOptions console;
};

// Episode interface over one console session. Not reentrant.
class Env {
 public:
  explicit Env(EnvOptions options);
  ~Env();
  Env(const Env&) = delete;
  Env& operator=(const Env&) = delete;

  // A seed restarts the start-selection stream; without one it continues.
  EncodedState reset(std::optional<std::uint64_t> seed = std::nullopt);
  StepResult step(int action);

  // ASCII grid (player as ^ > v <) followed by one HUD line.
  std::string render_text();
  // Writes the raw 320x240 frame as P6 and returns the path.
  std::filesystem::path render_image(const std::filesystem::path& path);

  StateKey save_visited();
  EncodedState resume_from(const StateKey& key);

  // Stops the console; saved keys become invalid. reset() starts a new one.
  void kill();

  const EnvVariant& variant() const { return variant_; }
  const kula::GameName& current() const { return current_; }
  bool active() const { return active_; }
  double episode_reward() const { return episode_reward_; }
  int episode_moves() const { return moves_; }
  game::KulaGame& game() { return *game_; }
  client::ConsoleClient& console() { return console_; }

 private:
  struct Visit {
    kula::GameName name;
    double episode_reward;
    int moves;
  };

  void ensure_running();
  EncodedState encode(game::VisualTensor visual, game::Sound sound, const game::RamState& ram) const;
  game::Sound empty_sound() const;

  EnvOptions options_;
  EnvVariant variant_;
  client::ConsoleClient console_;
  std::unique_ptr<game::KulaGame> game_;
  Rng rng_;
  kula::GameName current_;
  bool active_ = false;
  double episode_reward_ = 0.0;
  int moves_ = 0;
  std::uint64_t next_visit_ = 0;
  std::map<std::string, Visit> visits_;
};

}  // namespace vcle::env
