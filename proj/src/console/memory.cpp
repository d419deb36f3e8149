#include "vcle/console/memory.hpp"

#include <algorithm>
#include <string>

#include "vcle/common/bytes.hpp"
#include "vcle/common/error.hpp"

namespace vcle::console {

namespace {
void check(std::uint64_t addr, std::uint64_t len) {
  if (!Ram::in_range(addr, len))
    throw Error(Errc::OutOfBounds, "RAM access at " + std::to_string(addr) + "+" + std::to_string(len));
}
}  // namespace

std::span<const std::uint8_t> Ram::view(std::uint32_t addr, std::uint32_t len) const {
  check(addr, len);
  return std::span<const std::uint8_t>(bytes_).subspan(addr, len);
}

std::span<std::uint8_t> Ram::span(std::uint32_t addr, std::uint32_t len) {
  check(addr, len);
  return std::span<std::uint8_t>(bytes_).subspan(addr, len);
}

std::uint8_t Ram::read(std::uint32_t addr) const {
  check(addr, 1);
  return bytes_[addr];
}

void Ram::write(std::uint32_t addr, std::uint8_t value) {
  check(addr, 1);
  bytes_[addr] = value;
}

std::uint32_t Ram::read_le32(std::uint32_t addr) const {
  check(addr, 4);
  return load_le32(&bytes_[addr]);
}

void Ram::write_le32(std::uint32_t addr, std::uint32_t value) {
  check(addr, 4);
  store_le32(&bytes_[addr], value);
}

void Ram::clear() { std::fill(bytes_.begin(), bytes_.end(), 0); }

void FrameBuffer::fill(Rgb c) {
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }
}

void FrameBuffer::fill_rect(int x, int y, int w, int h, Rgb c) {
  int x0 = std::max(x, 0), y0 = std::max(y, 0);
  int x1 = std::min(x + w, width()), y1 = std::min(y + h, height());
  for (int yy = y0; yy < y1; ++yy)
    for (int xx = x0; xx < x1; ++xx) set(xx, yy, c);
}

void FrameBuffer::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width() || y >= height()) return;
  auto i = (static_cast<std::size_t>(y) * width() + x) * 3;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

Rgb FrameBuffer::get(int x, int y) const {
  auto i = (static_cast<std::size_t>(y) * width() + x) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

}  // namespace vcle::console
