#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace vcle {

// 64-bit FNV-1a. Stable across platforms, used for trajectory and state hashes.
class Fnv1a {
 public:
  Fnv1a& update(std::span<const std::uint8_t> data) {
    for (auto b : data) {
      state_ ^= b;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a& update_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      std::uint8_t b = static_cast<std::uint8_t>(v >> (8 * i));
      update(std::span<const std::uint8_t>(&b, 1));
    }
    return *this;
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a(std::span<const std::uint8_t> data) { return Fnv1a().update(data).digest(); }

std::string hash_hex(std::uint64_t h);

}  // namespace vcle
