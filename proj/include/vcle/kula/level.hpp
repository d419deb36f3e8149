#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vcle::kula {

enum class Tile : std::uint8_t { Void, Platform, Goal, Spike };
enum class ObjectKind : std::uint8_t { Coin, Key, Fruit };
enum class Orientation : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

std::uint32_t score_value(ObjectKind kind);
char orientation_char(Orientation o);
std::optional<Orientation> orientation_from_char(char c);
Orientation rotate_left(Orientation o);
Orientation rotate_right(Orientation o);
// Unit step in grid coordinates (row 0 is north, x grows east).
std::pair<int, int> forward_delta(Orientation o);

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct PlayerPose {
  int x = 0;
  int y = 0;
  Orientation orientation = Orientation::N;
  friend bool operator==(const PlayerPose&, const PlayerPose&) = default;
};

inline constexpr int kMaxLevelSize = 64;
inline constexpr std::uint32_t kDefaultTimeLimit = 100;
inline constexpr std::uint32_t kRandomTimeLimit = 80;

struct LevelSpec {
  int id = 0;
  std::uint32_t time_limit_s = kDefaultTimeLimit;
  int width = 0;
  int height = 0;
  std::vector<Tile> grid;  // row-major
  std::map<Cell, ObjectKind> objects;
  std::vector<PlayerPose> starts;
  std::optional<PlayerPose> reserved_start;

  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  Tile tile(int x, int y) const { return in_bounds(x, y) ? grid[y * width + x] : Tile::Void; }
  std::size_t key_count() const;
  // Throws BadLevel when an invariant is violated.
  void validate() const;
};

// Level file format: header lines `id: n`, `time: s`, `start: x,y,D`,
// `start!: x,y,D`, then grid rows over `.#CKFGS`.
LevelSpec parse_level(std::string_view text);
std::string format_level(const LevelSpec& level);

// Bundled levels 1..3.
const LevelSpec& builtin_level(int id);
std::string_view builtin_level_text(int id);
inline constexpr int kBuiltinLevelCount = 3;

// Grid glyph for a cell, honouring collected objects.
char cell_glyph(const LevelSpec& level, int x, int y, bool object_present);

}  // namespace vcle::kula
