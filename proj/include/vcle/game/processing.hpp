#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vcle::game {

// H x W x 3 unsigned bytes, interleaved RGB.
struct VisualTensor {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  // One channel as an H x W plane.
  std::vector<std::uint8_t> channel(int c) const;
  friend bool operator==(const VisualTensor&, const VisualTensor&) = default;
};

// Area-average downsample of a width x height RGB24 frame to size x size.
// Each output value is the exact overlap-weighted mean rounded half up.
// Throws BadFrame when rgb.size() != width*height*3.
VisualTensor process_frame(std::span<const std::uint8_t> rgb, int width, int height, int size = 84);

// Removes the longest prefix and suffix whose samples all satisfy
// |s| <= threshold * 32768. All-silent input yields an empty waveform.
std::vector<std::int16_t> trim_silence(std::span<const std::int16_t> wave, double threshold = 0.001);

}  // namespace vcle::game
