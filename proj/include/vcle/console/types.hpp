#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace vcle::console {

inline constexpr std::size_t kRamSize = 2 * 1024 * 1024;
inline constexpr int kFrameRate = 60;
inline constexpr int kSampleRate = 22050;
inline constexpr int kScreenWidth = 320;
inline constexpr int kScreenHeight = 240;

// System area written by the console itself every frame.
inline constexpr std::uint32_t kFrameCounterAddr = 0x0000'0000;  // u32 little-endian

enum class Button : std::uint8_t {
  Up = 0,
  Down,
  Left,
  Right,
  Cross,
  Circle,
  Square,
  Triangle,
  L1,
  L2,
  R1,
  R2,
  Start,
  Select,
};

inline constexpr std::size_t kButtonCount = 14;

std::string_view to_string(Button b);
std::optional<Button> button_from_string(std::string_view name);
std::optional<Button> button_from_index(std::uint8_t index);

class ButtonSet {
 public:
  constexpr ButtonSet() = default;
  constexpr ButtonSet(std::initializer_list<Button> buttons) {
    for (auto b : buttons) insert(b);
  }

  constexpr void insert(Button b) { bits_ |= bit(b); }
  constexpr void erase(Button b) { bits_ &= static_cast<std::uint16_t>(~bit(b)); }
  constexpr bool contains(Button b) const { return (bits_ & bit(b)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint16_t bits() const { return bits_; }
  static constexpr ButtonSet from_bits(std::uint16_t bits) {
    ButtonSet s;
    s.bits_ = bits & 0x3FFF;
    return s;
  }

  friend constexpr bool operator==(ButtonSet, ButtonSet) = default;

 private:
  static constexpr std::uint16_t bit(Button b) { return static_cast<std::uint16_t>(1u << static_cast<unsigned>(b)); }
  std::uint16_t bits_ = 0;
};

struct ControlEvent {
  enum class Kind : std::uint8_t { Hold, Release, Delay };

  Kind kind = Kind::Hold;
  Button button = Button::Up;
  std::uint32_t delay_ms = 0;

  static ControlEvent hold(Button b) { return {Kind::Hold, b, 0}; }
  static ControlEvent release(Button b) { return {Kind::Release, b, 0}; }
  static ControlEvent delay(std::uint32_t ms) { return {Kind::Delay, Button::Up, ms}; }

  friend bool operator==(const ControlEvent&, const ControlEvent&) = default;
};

// Delays are measured in game time: frames = round(ms * 60 / 1000), half up.
constexpr std::uint64_t delay_frames(std::uint32_t ms) {
  return (static_cast<std::uint64_t>(ms) * kFrameRate + 500) / 1000;
}

// Samples produced by frame `frame` so that N frames yield floor(N*22050/60).
constexpr std::size_t samples_for_frame(std::uint64_t frame) {
  auto upto = [](std::uint64_t f) { return f * kSampleRate / kFrameRate; };
  return static_cast<std::size_t>(upto(frame + 1) - upto(frame));
}

}  // namespace vcle::console
