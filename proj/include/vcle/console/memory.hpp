#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vcle/console/types.hpp"

namespace vcle::console {

// Main memory. Always exactly kRamSize bytes; every access is bounds-checked.
class Ram {
 public:
  Ram() : bytes_(kRamSize, 0) {}

  std::span<const std::uint8_t> view(std::uint32_t addr, std::uint32_t len) const;
  std::span<std::uint8_t> span(std::uint32_t addr, std::uint32_t len);
  std::uint8_t read(std::uint32_t addr) const;
  void write(std::uint32_t addr, std::uint8_t value);
  std::uint32_t read_le32(std::uint32_t addr) const;
  void write_le32(std::uint32_t addr, std::uint32_t value);
  void clear();

  std::span<const std::uint8_t> all() const { return bytes_; }
  std::span<std::uint8_t> all() { return bytes_; }

  static bool in_range(std::uint64_t addr, std::uint64_t len) { return addr + len <= kRamSize; }

 private:
  std::vector<std::uint8_t> bytes_;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 320x240 RGB24, rows top to bottom.
class FrameBuffer {
 public:
  FrameBuffer() : pixels_(static_cast<std::size_t>(kScreenWidth) * kScreenHeight * 3, 0) {}

  static constexpr int width() { return kScreenWidth; }
  static constexpr int height() { return kScreenHeight; }

  void fill(Rgb c);
  void fill_rect(int x, int y, int w, int h, Rgb c);
  void set(int x, int y, Rgb c);
  Rgb get(int x, int y) const;

  std::span<const std::uint8_t> bytes() const { return pixels_; }
  std::span<std::uint8_t> bytes() { return pixels_; }

  friend bool operator==(const FrameBuffer&, const FrameBuffer&) = default;

 private:
  std::vector<std::uint8_t> pixels_;
};

}  // namespace vcle::console
