#include "vcle/kula/level.hpp"

#include <array>
#include <sstream>

#include "vcle/common/error.hpp"

namespace vcle::kula {

namespace {

constexpr std::string_view kLevel1 = R"(id: 1
time: 100
start: 2,5,N
start: 0,0,S
start: 4,3,W
start: 0,5,E
##G##
#####
##K##
#F###
##C##
#####
)";

// Four islands split by a void cross; the bottom-left island hosts the
// reserved validation start.
constexpr std::string_view kLevel2 = R"(id: 2
time: 100
start: 1,2,E
start: 0,6,N
start: 6,6,W
start: 4,0,S
start!: 2,4,N
###.###
#C#.#K#
###.###
.......
###.#G#
#F#.###
###.###
)";

constexpr std::string_view kLevel3 = R"(id: 3
time: 100
start: 6,6,W
start: 3,6,N
start: 6,4,W
start: 6,0,W
G###C##
.#.#.#.
##S#K##
.#.#.#.
#C##F##
.#.#.#.
#######
)";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.size() > 9) throw Error(Errc::BadLevel, "bad number '" + std::string(s) + "'");
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(Errc::BadLevel, "bad number '" + std::string(s) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

PlayerPose parse_pose(std::string_view s) {
  std::array<std::string_view, 3> parts;
  for (int i = 0; i < 3; ++i) {
    auto comma = s.find(',');
    if (i < 2 && comma == std::string_view::npos) throw Error(Errc::BadLevel, "start needs x,y,dir");
    parts[i] = trim(s.substr(0, comma));
    s = i < 2 ? s.substr(comma + 1) : std::string_view{};
    if (i == 2 && comma != std::string_view::npos) throw Error(Errc::BadLevel, "start needs x,y,dir");
  }
  auto o = parts[2].size() == 1 ? orientation_from_char(parts[2][0]) : std::nullopt;
  if (!o) throw Error(Errc::BadLevel, "bad orientation '" + std::string(parts[2]) + "'");
  return {parse_int(parts[0]), parse_int(parts[1]), *o};
}

}  // namespace

std::uint32_t score_value(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Coin: return 250;
    case ObjectKind::Key: return 1000;
    case ObjectKind::Fruit: return 2500;
  }
  return 0;
}

char orientation_char(Orientation o) { return "NESW"[static_cast<int>(o) & 3]; }

std::optional<Orientation> orientation_from_char(char c) {
  switch (c) {
    case 'N': return Orientation::N;
    case 'E': return Orientation::E;
    case 'S': return Orientation::S;
    case 'W': return Orientation::W;
  }
  return std::nullopt;
}

Orientation rotate_left(Orientation o) { return static_cast<Orientation>((static_cast<int>(o) + 3) & 3); }
Orientation rotate_right(Orientation o) { return static_cast<Orientation>((static_cast<int>(o) + 1) & 3); }

std::pair<int, int> forward_delta(Orientation o) {
  switch (o) {
    case Orientation::N: return {0, -1};
    case Orientation::E: return {1, 0};
    case Orientation::S: return {0, 1};
    case Orientation::W: return {-1, 0};
  }
  return {0, 0};
}

std::size_t LevelSpec::key_count() const {
  std::size_t n = 0;
  for (const auto& [cell, kind] : objects) n += kind == ObjectKind::Key;
  return n;
}

void LevelSpec::validate() const {
  if (width < 1 || height < 1 || width > kMaxLevelSize || height > kMaxLevelSize)
    throw Error(Errc::BadLevel, "grid must be between 1x1 and 64x64");
  if (grid.size() != static_cast<std::size_t>(width * height)) throw Error(Errc::BadLevel, "grid size mismatch");
  if (time_limit_s == 0) throw Error(Errc::BadLevel, "time limit must be positive");
  if (starts.empty()) throw Error(Errc::BadLevel, "level needs at least one start");
  auto check_pose = [&](const PlayerPose& p) {
    if (tile(p.x, p.y) != Tile::Platform || objects.count({p.x, p.y}))
      throw Error(Errc::BadLevel, "start " + std::to_string(p.x) + "," + std::to_string(p.y) + " is not a bare platform");
  };
  for (const auto& s : starts) check_pose(s);
  if (reserved_start) check_pose(*reserved_start);
  for (const auto& [cell, kind] : objects)
    if (tile(cell.x, cell.y) != Tile::Platform) throw Error(Errc::BadLevel, "object off platform");
  bool has_goal = false;
  for (auto t : grid) has_goal |= t == Tile::Goal;
  if (key_count() > 0 && !has_goal) throw Error(Errc::BadLevel, "keys without a goal");
}

LevelSpec parse_level(std::string_view text) {
  LevelSpec level;
  bool have_id = false;
  std::vector<std::string_view> rows;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon != std::string_view::npos) {
      if (!rows.empty()) throw Error(Errc::BadLevel, "header after grid rows");
      auto key = trim(line.substr(0, colon));
      auto value = line.substr(colon + 1);
      if (key == "id") {
        level.id = parse_int(value);
        have_id = true;
      } else if (key == "time") {
        level.time_limit_s = static_cast<std::uint32_t>(parse_int(value));
      } else if (key == "start") {
        level.starts.push_back(parse_pose(value));
      } else if (key == "start!") {
        if (level.reserved_start) throw Error(Errc::BadLevel, "at most one reserved start");
        level.reserved_start = parse_pose(value);
      } else {
        throw Error(Errc::BadLevel, "unknown header '" + std::string(key) + "'");
      }
      continue;
    }
    rows.push_back(line);
  }
  if (!have_id) throw Error(Errc::BadLevel, "missing id header");
  if (rows.empty()) throw Error(Errc::BadLevel, "missing grid");
  level.height = static_cast<int>(rows.size());
  level.width = static_cast<int>(rows[0].size());
  if (level.width > kMaxLevelSize || level.height > kMaxLevelSize) throw Error(Errc::BadLevel, "grid larger than 64x64");
  level.grid.assign(static_cast<std::size_t>(level.width * level.height), Tile::Void);
  for (int y = 0; y < level.height; ++y) {
    if (static_cast<int>(rows[y].size()) != level.width) throw Error(Errc::BadLevel, "ragged grid row " + std::to_string(y));
    for (int x = 0; x < level.width; ++x) {
      auto& t = level.grid[y * level.width + x];
      switch (rows[y][x]) {
        case '.': t = Tile::Void; break;
        case '#': t = Tile::Platform; break;
        case 'G': t = Tile::Goal; break;
        case 'S': t = Tile::Spike; break;
        case 'C': t = Tile::Platform; level.objects[{x, y}] = ObjectKind::Coin; break;
        case 'K': t = Tile::Platform; level.objects[{x, y}] = ObjectKind::Key; break;
        case 'F': t = Tile::Platform; level.objects[{x, y}] = ObjectKind::Fruit; break;
        default: throw Error(Errc::BadLevel, std::string("bad grid char '") + rows[y][x] + "'");
      }
    }
  }
  level.validate();
  return level;
}

char cell_glyph(const LevelSpec& level, int x, int y, bool object_present) {
  if (object_present) {
    auto it = level.objects.find({x, y});
    if (it != level.objects.end()) return "CKF"[static_cast<int>(it->second)];
  }
  switch (level.tile(x, y)) {
    case Tile::Void: return '.';
    case Tile::Platform: return '#';
    case Tile::Goal: return 'G';
    case Tile::Spike: return 'S';
  }
  return '?';
}

std::string format_level(const LevelSpec& level) {
  std::ostringstream out;
  out << "id: " << level.id << "\ntime: " << level.time_limit_s << "\n";
  auto pose = [](const PlayerPose& p) {
    return std::to_string(p.x) + "," + std::to_string(p.y) + "," + orientation_char(p.orientation);
  };
  for (const auto& s : level.starts) out << "start: " << pose(s) << "\n";
  if (level.reserved_start) out << "start!: " << pose(*level.reserved_start) << "\n";
  for (int y = 0; y < level.height; ++y) {
    for (int x = 0; x < level.width; ++x) out << cell_glyph(level, x, y, true);
    out << "\n";
  }
  return out.str();
}

std::string_view builtin_level_text(int id) {
  switch (id) {
    case 1: return kLevel1;
    case 2: return kLevel2;
    case 3: return kLevel3;
  }
  throw Error(Errc::BadLevel, "no bundled level " + std::to_string(id));
}

const LevelSpec& builtin_level(int id) {
  static const std::array<LevelSpec, kBuiltinLevelCount> levels = {
      parse_level(kLevel1), parse_level(kLevel2), parse_level(kLevel3)};
  if (id < 1 || id > kBuiltinLevelCount) throw Error(Errc::BadLevel, "no bundled level " + std::to_string(id));
  return levels[id - 1];
}

}  // namespace vcle::kula
