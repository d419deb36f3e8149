#include "vcle/console/types.hpp"

namespace vcle::console {

namespace {
constexpr std::array<std::string_view, kButtonCount> kNames = {
    "Up", "Down", "Left", "Right", "Cross", "Circle", "Square",
    "Triangle", "L1", "L2", "R1", "R2", "Start", "Select"};
}

std::string_view to_string(Button b) { return kNames[static_cast<std::size_t>(b)]; }

std::optional<Button> button_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Button>(i);
  return std::nullopt;
}

std::optional<Button> button_from_index(std::uint8_t index) {
  if (index >= kButtonCount) return std::nullopt;
  return static_cast<Button>(index);
}

}  // namespace vcle::console
