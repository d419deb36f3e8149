#include <algorithm>
#include <string>

#include "vcle/kula/cartridge.hpp"

namespace vcle::kula {

namespace {

using console::FrameBuffer;
using console::Rgb;

constexpr Rgb kBackground{12, 12, 28};
constexpr Rgb kHud{30, 30, 60};
constexpr Rgb kText{240, 240, 240};
constexpr Rgb kPlatform{120, 124, 150};
constexpr Rgb kPlatformEdge{80, 84, 110};
constexpr Rgb kGoal{40, 190, 90};
constexpr Rgb kGoalLocked{30, 110, 60};
constexpr Rgb kSpike{200, 50, 50};
constexpr Rgb kCoin{250, 210, 40};
constexpr Rgb kKey{250, 140, 20};
constexpr Rgb kFruit{220, 40, 160};
constexpr Rgb kBall{235, 235, 255};
constexpr Rgb kMarker{20, 20, 90};
constexpr Rgb kWonBorder{60, 230, 90};
constexpr Rgb kLostBorder{230, 50, 50};

// 3x5 glyphs, one 3-bit row per nibble, top row first.
std::uint16_t glyph(char c) {
  switch (c) {
    case '0': return 0x7B6F;
    case '1': return 0x2C97;
    case '2': return 0x73E7;
    case '3': return 0x72CF;
    case '4': return 0x5BC9;
    case '5': return 0x79CF;
    case '6': return 0x79EF;
    case '7': return 0x7249;
    case '8': return 0x7BEF;
    case '9': return 0x7BCF;
    case 'S': return 0x79CF;
    case 'C': return 0x7927;
    case 'O': return 0x7B6F;
    case 'R': return 0x7BF5;
    case 'E': return 0x79E7;
    case 'T': return 0x7492;
    case 'I': return 0x7497;
    case 'M': return 0x5FED;
    case 'W': return 0x5B7D;
    case 'N': return 0x7B6D;
    case 'L': return 0x4927;
    case 'K': return 0x5BAD;
    default: return 0;
  }
}

void draw_text(FrameBuffer& fb, int x, int y, const std::string& text, int scale, Rgb color) {
  for (char c : text) {
    auto bits = glyph(c);
    for (int row = 0; row < 5; ++row)
      for (int col = 0; col < 3; ++col)
        if (bits & (1u << (14 - (row * 3 + col)))) fb.fill_rect(x + col * scale, y + row * scale, scale, scale, color);
    x += 4 * scale;
  }
}

std::string pad(std::uint32_t v, std::size_t width) {
  auto s = std::to_string(v);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

void fill_disc(FrameBuffer& fb, int cx, int cy, int r, Rgb color) {
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= r * r) fb.set(cx + dx, cy + dy, color);
}

}  // namespace

void render_engine(const Engine& engine, FrameBuffer& fb) {
  const auto& level = engine.level();
  fb.fill(kBackground);
  fb.fill_rect(0, 0, FrameBuffer::width(), 20, kHud);
  draw_text(fb, 4, 5, "SC " + pad(engine.score(), 6), 2, kText);
  draw_text(fb, 196, 5, "TI " + pad((engine.clock_frames() + 59) / 60, 3), 2, kText);
  draw_text(fb, 296, 5, "K" + std::to_string(engine.keys_remaining() % 10), 2, kText);

  const int area_x = 8, area_y = 24, area_w = 304, area_h = 212;
  const int cell = std::max(2, std::min({area_w / level.width, area_h / level.height, 40}));
  const int ox = area_x + (area_w - cell * level.width) / 2;
  const int oy = area_y + (area_h - cell * level.height) / 2;

  for (int y = 0; y < level.height; ++y) {
    for (int x = 0; x < level.width; ++x) {
      const int px = ox + x * cell, py = oy + y * cell;
      auto tile = level.tile(x, y);
      if (tile == Tile::Void) continue;
      fb.fill_rect(px, py, cell, cell, kPlatformEdge);
      Rgb face = kPlatform;
      if (tile == Tile::Goal) face = engine.keys_remaining() == 0 ? kGoal : kGoalLocked;
      fb.fill_rect(px + 1, py + 1, cell - 2, cell - 2, face);
      if (tile == Tile::Spike) {
        for (int i = 0; i < cell / 2; ++i) fb.fill_rect(px + cell / 2 - i / 2, py + cell / 4 + i, i + 1, 1, kSpike);
      }
      if (engine.object_present(x, y)) {
        auto kind = level.objects.at({x, y});
        Rgb c = kind == ObjectKind::Coin ? kCoin : kind == ObjectKind::Key ? kKey : kFruit;
        int s = cell / 3;
        fb.fill_rect(px + (cell - s) / 2, py + (cell - s) / 2, s, s, c);
      }
    }
  }

  // Ball position, interpolated along the move and shrinking while falling.
  const auto& anim = engine.animation();
  PlayerPose pose = engine.pose();
  double fx = pose.x, fy = pose.y;
  int radius = cell * 3 / 8;
  Orientation facing = pose.orientation;
  if (anim) {
    const double t = anim->travel > 0 ? std::min(1.0, static_cast<double>(anim->elapsed) / anim->travel) : 1.0;
    fx = anim->from.x + (anim->to.x - anim->from.x) * t;
    fy = anim->from.y + (anim->to.y - anim->from.y) * t;
    facing = t < 0.5 ? anim->from.orientation : anim->to.orientation;
    if (anim->elapsed > anim->travel) {
      const int fall = anim->total - anim->travel;
      radius = radius * (anim->total - anim->elapsed) / std::max(1, fall);
    }
  } else if (engine.status() == GameStatus::LostFall) {
    radius = 0;
  }
  const int cx = ox + static_cast<int>(fx * cell + cell / 2.0);
  const int cy = oy + static_cast<int>(fy * cell + cell / 2.0);
  if (radius > 0) {
    fill_disc(fb, cx, cy, radius, kBall);
    auto [dx, dy] = forward_delta(facing);
    fill_disc(fb, cx + dx * radius * 2 / 3, cy + dy * radius * 2 / 3, std::max(1, radius / 3), kMarker);
  }

  if (engine.status() != GameStatus::Playing) {
    Rgb border = engine.status() == GameStatus::Won ? kWonBorder : kLostBorder;
    fb.fill_rect(0, 20, FrameBuffer::width(), 3, border);
    fb.fill_rect(0, FrameBuffer::height() - 3, FrameBuffer::width(), 3, border);
    fb.fill_rect(0, 20, 3, FrameBuffer::height() - 20, border);
    fb.fill_rect(FrameBuffer::width() - 3, 20, 3, FrameBuffer::height() - 20, border);
  }
}

}  // namespace vcle::kula
