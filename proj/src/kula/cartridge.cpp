#include "vcle/kula/cartridge.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vcle/common/error.hpp"

namespace vcle::kula {

namespace {

std::optional<std::uint32_t> parse_u32(std::string_view s) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_game_name(const GameName& name) {
  std::string out = "kula:" + name.level + "?start=";
  out += name.start == kReservedStart ? std::string("reserved") : std::to_string(name.start);
  if (name.time_limit_s) out += "&time=" + std::to_string(*name.time_limit_s);
  return out;
}

std::optional<GameName> parse_game_name(std::string_view name) {
  constexpr std::string_view prefix = "kula:";
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  name.remove_prefix(prefix.size());
  GameName out;
  auto q = name.find('?');
  out.level = std::string(name.substr(0, q));
  if (out.level.empty()) return std::nullopt;
  if (q == std::string_view::npos) return out;
  auto query = name.substr(q + 1);
  while (!query.empty()) {
    auto amp = query.find('&');
    auto item = query.substr(0, amp);
    query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    auto key = item.substr(0, eq);
    auto value = item.substr(eq + 1);
    if (key == "start") {
      if (value == "reserved") {
        out.start = kReservedStart;
      } else {
        auto v = parse_u32(value);
        if (!v || *v > 255) throw Error(Errc::UnknownStart, "bad start '" + std::string(value) + "'");
        out.start = static_cast<int>(*v);
      }
    } else if (key == "time") {
      auto v = parse_u32(value);
      if (!v || *v == 0 || *v > 3600) return std::nullopt;
      out.time_limit_s = *v;
    } else {
      return std::nullopt;
    }
  }
  return out;
}

LevelSpec resolve_level(const std::string& level) {
  for (int id = 1; id <= kBuiltinLevelCount; ++id)
    if (level == "level" + std::to_string(id)) return builtin_level(id);
  std::ifstream in(level, std::ios::binary);
  if (!in) throw Error(Errc::UnknownGame, "no level '" + level + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_level(text.str());
  } catch (const Error& e) {
    throw Error(Errc::UnknownGame, "level '" + level + "': " + e.what());
  }
}

KulaCartridge::KulaCartridge(LevelSpec level, int start, std::optional<std::uint32_t> time_limit_s)
    : engine_(std::move(level), start, time_limit_s) {}

void KulaCartridge::boot(console::Ram& ram) {
  written_revision_ = ~0u;
  write_ram(ram);
}

void KulaCartridge::tick(console::ButtonSet held, console::Ram& ram) {
  engine_.tick(held);
  write_ram(ram);
}

void KulaCartridge::write_ram(console::Ram& ram) {
  const auto& pose = engine_.pose();
  ram.write_le32(ram::kScore, engine_.score());
  ram.write_le32(ram::kClockFrames, engine_.clock_frames());
  ram.write(ram::kStatus, static_cast<std::uint8_t>(engine_.status()));
  ram.write(ram::kMoving, engine_.moving() ? 1 : 0);
  ram.write(ram::kX, static_cast<std::uint8_t>(pose.x));
  ram.write(ram::kY, static_cast<std::uint8_t>(pose.y));
  ram.write(ram::kOrientation, static_cast<std::uint8_t>(pose.orientation));
  ram.write(ram::kKeysRemaining, engine_.keys_remaining());
  ram.write(ram::kLevelId, static_cast<std::uint8_t>(engine_.level().id));
  if (written_revision_ != engine_.map_revision()) {
    const auto& level = engine_.level();
    ram.write(ram::kTileMap, static_cast<std::uint8_t>(level.width));
    ram.write(ram::kTileMap + 1, static_cast<std::uint8_t>(level.height));
    std::uint32_t at = ram::kTileMap + 2;
    for (int y = 0; y < level.height; ++y)
      for (int x = 0; x < level.width; ++x)
        ram.write(at++, static_cast<std::uint8_t>(cell_glyph(level, x, y, engine_.object_present(x, y))));
    written_revision_ = engine_.map_revision();
  }
}

void KulaCartridge::mix(std::span<std::int16_t> out) { engine_.mix(out); }

void KulaCartridge::render(console::FrameBuffer& fb) const { render_engine(engine_, fb); }

std::vector<std::uint8_t> KulaCartridge::save_state() const { return engine_.save(); }

void KulaCartridge::load_state(std::span<const std::uint8_t> blob) {
  engine_.load(blob);
  written_revision_ = engine_.map_revision();
}

console::CartridgeLoader cartridge_loader() {
  return [](std::string_view name) -> std::unique_ptr<console::Cartridge> {
    auto parsed = parse_game_name(name);
    if (!parsed) return nullptr;
    return std::make_unique<KulaCartridge>(resolve_level(parsed->level), parsed->start, parsed->time_limit_s);
  };
}

}  // namespace vcle::kula
