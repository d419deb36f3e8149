#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcle/console/memory.hpp"
#include "vcle/console/types.hpp"

namespace vcle::console {

// A game program hosted by the console. All methods run on the console's
// single execution context.
class Cartridge {
 public:
  virtual ~Cartridge() = default;

  // Called once after the console reboots with this cartridge (RAM is zeroed).
  virtual void boot(Ram& ram) = 0;
  // Advance one frame with the controller state in effect for that frame.
  virtual void tick(ButtonSet held, Ram& ram) = 0;
  // Produce this frame's audio; `out` arrives zero-filled.
  virtual void mix(std::span<std::int16_t> out) = 0;
  // Draw the current state. Must depend only on cartridge state.
  virtual void render(FrameBuffer& fb) const = 0;

  virtual std::vector<std::uint8_t> save_state() const = 0;
  virtual void load_state(std::span<const std::uint8_t> blob) = 0;
};

// Resolves a game name (e.g. "kula:level1?start=0") to a fresh cartridge.
// Returns nullptr when the name is not recognised.
using CartridgeLoader = std::function<std::unique_ptr<Cartridge>(std::string_view name)>;

}  // namespace vcle::console
