#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "vcle/console/cartridge.hpp"
#include "vcle/kula/engine.hpp"

namespace vcle::kula {

// Cartridge RAM region. Multi-byte values are little-endian.
namespace ram {
inline constexpr std::uint32_t kBase = 0x0001'0000;
inline constexpr std::uint32_t kScore = kBase + 0x00;        // u32
inline constexpr std::uint32_t kClockFrames = kBase + 0x04;  // u32
inline constexpr std::uint32_t kStatus = kBase + 0x08;       // u8
inline constexpr std::uint32_t kMoving = kBase + 0x09;       // u8
inline constexpr std::uint32_t kX = kBase + 0x0A;            // u8
inline constexpr std::uint32_t kY = kBase + 0x0B;            // u8
inline constexpr std::uint32_t kOrientation = kBase + 0x0C;  // u8, N=0 E=1 S=2 W=3
inline constexpr std::uint32_t kKeysRemaining = kBase + 0x0D;
inline constexpr std::uint32_t kLevelId = kBase + 0x0E;
inline constexpr std::uint32_t kBlockSize = 0x0F;
// Tile map: width u8, height u8, then width*height glyphs over ".#CKFGS".
inline constexpr std::uint32_t kTileMap = kBase + 0x100;
}  // namespace ram

// Parsed form of "kula:<level>?start=<n|reserved>&time=<s>". <level> is
// level1..level3 or a path to a level file.
struct GameName {
  std::string level = "level1";
  int start = 0;
  std::optional<std::uint32_t> time_limit_s;
};

std::string format_game_name(const GameName& name);
// Returns nullopt when `name` is not a kula game name.
std::optional<GameName> parse_game_name(std::string_view name);
// Throws UnknownGame when the level cannot be found or parsed.
LevelSpec resolve_level(const std::string& level);

class KulaCartridge : public console::Cartridge {
 public:
  KulaCartridge(LevelSpec level, int start, std::optional<std::uint32_t> time_limit_s = std::nullopt);

  void boot(console::Ram& ram) override;
  void tick(console::ButtonSet held, console::Ram& ram) override;
  void mix(std::span<std::int16_t> out) override;
  void render(console::FrameBuffer& fb) const override;
  std::vector<std::uint8_t> save_state() const override;
  void load_state(std::span<const std::uint8_t> blob) override;

  const Engine& engine() const { return engine_; }

 private:
  void write_ram(console::Ram& ram);

  Engine engine_;
  std::uint32_t written_revision_ = ~0u;
};

// Loader for every kula game name; nullptr for other names.
console::CartridgeLoader cartridge_loader();

// Draw the engine state into a 320x240 frame.
void render_engine(const Engine& engine, console::FrameBuffer& fb);

}  // namespace vcle::kula
