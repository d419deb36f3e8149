#include "vcle/game/processing.hpp"

#include <algorithm>
#include <cstdlib>

#include "vcle/common/error.hpp"

namespace vcle::game {

namespace {

struct Tap {
  int src;
  std::int64_t weight;
};

// Overlaps between output cell i and source cells, measured in units where
// a source cell is `out` long and an output cell is `in` long.
std::vector<std::vector<Tap>> axis_taps(int in, int out) {
  std::vector<std::vector<Tap>> taps(out);
  for (int o = 0; o < out; ++o) {
    const std::int64_t lo = static_cast<std::int64_t>(o) * in, hi = static_cast<std::int64_t>(o + 1) * in;
    for (int s = static_cast<int>(lo / out); s < in && static_cast<std::int64_t>(s) * out < hi; ++s) {
      const std::int64_t a = std::max(lo, static_cast<std::int64_t>(s) * out);
      const std::int64_t b = std::min(hi, static_cast<std::int64_t>(s + 1) * out);
      if (b > a) taps[o].push_back({s, b - a});
    }
  }
  return taps;
}

}  // namespace

std::vector<std::uint8_t> VisualTensor::channel(int c) const {
  std::vector<std::uint8_t> plane(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = data[i * 3 + c];
  return plane;
}

VisualTensor process_frame(std::span<const std::uint8_t> rgb, int width, int height, int size) {
  if (width <= 0 || height <= 0 || rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw Error(Errc::BadFrame, "frame is not " + std::to_string(width) + "x" + std::to_string(height) + " RGB");
  if (size <= 0) throw Error(Errc::BadFrame, "output size must be positive");
  const auto xs = axis_taps(width, size);
  const auto ys = axis_taps(height, size);
  const std::int64_t den = static_cast<std::int64_t>(width) * height;
  VisualTensor out{size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size * 3)};
  std::vector<std::int64_t> row(static_cast<std::size_t>(size) * 3);
  for (int oy = 0; oy < size; ++oy) {
    std::fill(row.begin(), row.end(), 0);
    for (const auto& ty : ys[oy]) {
      const std::uint8_t* src = rgb.data() + static_cast<std::size_t>(ty.src) * width * 3;
      for (int ox = 0; ox < size; ++ox) {
        std::int64_t acc[3] = {0, 0, 0};
        for (const auto& tx : xs[ox])
          for (int c = 0; c < 3; ++c) acc[c] += tx.weight * src[tx.src * 3 + c];
        for (int c = 0; c < 3; ++c) row[ox * 3 + c] += ty.weight * acc[c];
      }
    }
    for (int i = 0; i < size * 3; ++i)
      out.data[static_cast<std::size_t>(oy) * size * 3 + i] = static_cast<std::uint8_t>((2 * row[i] + den) / (2 * den));
  }
  return out;
}

std::vector<std::int16_t> trim_silence(std::span<const std::int16_t> wave, double threshold) {
  const double limit = threshold * 32768.0;
  auto loud = [limit](std::int16_t s) { return std::abs(static_cast<int>(s)) > limit; };
  auto first = std::find_if(wave.begin(), wave.end(), loud);
  if (first == wave.end()) return {};
  auto last = std::find_if(wave.rbegin(), wave.rend(), loud).base();
  return {first, last};
}

}  // namespace vcle::game
