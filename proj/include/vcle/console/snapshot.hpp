#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "vcle/common/bytes.hpp"
#include "vcle/console/memory.hpp"
#include "vcle/console/types.hpp"

namespace vcle::console {

// Complete machine state. Loading one and replaying a control script
// reproduces the saved trajectory bit for bit.
struct ConsoleSnapshot {
  Bytes ram;
  FrameBuffer framebuffer;
  std::uint64_t frame_counter = 0;
  std::uint32_t speed_percent = 100;
  std::string game;  // empty when no cartridge is loaded
  Bytes cartridge_state;
  std::deque<ControlEvent> pending_controls;
  ButtonSet held;
  std::uint64_t delay_until = 0;
  bool recording = false;
  std::vector<std::int16_t> recorded;
};

inline constexpr std::uint16_t kSnapshotVersion = 1;

// File layout: "VCLE", u16 version, then u32-length-prefixed sections:
// counters, RAM (zlib deflate), framebuffer, cartridge blob, controls, audio.
Bytes encode_snapshot(const ConsoleSnapshot& snap);
ConsoleSnapshot decode_snapshot(std::span<const std::uint8_t> data);

void write_snapshot_file(const std::filesystem::path& path, const ConsoleSnapshot& snap);
ConsoleSnapshot read_snapshot_file(const std::filesystem::path& path);

}  // namespace vcle::console
