#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "solver.hpp"
#include "vcle/common/error.hpp"
#include "vcle/console/console.hpp"
#include "vcle/kula/cartridge.hpp"
#include "vcle/kula/engine.hpp"
#include "vcle/kula/level.hpp"
#include "vcle/kula/synth.hpp"

using namespace vcle;
using namespace vcle::kula;
using console::Button;
using console::ButtonSet;

namespace {

LevelSpec level_from(const std::string& text) { return parse_level(text); }

// Press the buttons for one tick, then release and tick until idle.
int run_move(Engine& e, ButtonSet press) {
  e.tick(press);
  int frames = 1;
  while (e.moving()) {
    e.tick({});
    ++frames;
  }
  return frames;
}

int moving_frames(Engine& e, ButtonSet press) {
  int n = 0;
  e.tick(press);
  while (e.moving()) {
    ++n;
    e.tick({});
  }
  return n;
}

const LevelSpec kCorridor = parse_level(
    "id: 9\n"
    "time: 100\n"
    "start: 0,4,N\n"
    "G\n"
    "K\n"
    "#\n"
    "C\n"
    "#\n");

}  // namespace

TEST(Level, BuiltinLevelsParseAndValidate) {
  for (int id = 1; id <= kBuiltinLevelCount; ++id) {
    const auto& l = builtin_level(id);
    EXPECT_EQ(l.id, id);
    EXPECT_EQ(l.time_limit_s, 100u);
    EXPECT_EQ(l.starts.size(), 4u);
    EXPECT_EQ(l.reserved_start.has_value(), id == 2);
    EXPECT_NO_THROW(l.validate());
  }
}

TEST(Level, FormatRoundTrips) {
  for (int id = 1; id <= kBuiltinLevelCount; ++id) {
    auto text = format_level(builtin_level(id));
    EXPECT_EQ(text, builtin_level_text(id));
  }
}

TEST(Level, RejectsBadInput) {
  EXPECT_THROW(parse_level("time: 10\n#\n"), Error);                     // no id
  EXPECT_THROW(parse_level("id: 1\nstart: 0,0,N\n#X\n"), Error);         // bad glyph
  EXPECT_THROW(parse_level("id: 1\nstart: 0,0,N\n##\n#\n"), Error);      // ragged
  EXPECT_THROW(parse_level("id: 1\nstart: 1,0,N\n#.\n"), Error);         // start on void
  EXPECT_THROW(parse_level("id: 1\nstart: 0,0,N\n#K\n"), Error);         // key without goal
  EXPECT_THROW(parse_level("id: 1\nstart: 0,0,Q\n#\n"), Error);          // bad orientation
  EXPECT_THROW(parse_level("id: 1\n#\n"), Error);                        // no start
  EXPECT_THROW(parse_level("id: 1\nstart: 0,0,N\nstart!: 0,0,N\nstart!: 0,0,N\n#\n"), Error);
  std::string wide(65, '#');
  EXPECT_THROW(parse_level("id: 1\nstart: 0,0,N\n" + wide + "\n"), Error);
}

TEST(Level, EveryBuiltinStartIsWinnableWithinTheClock) {
  for (int id = 1; id <= kBuiltinLevelCount; ++id) {
    const auto& l = builtin_level(id);
    auto starts = l.starts;
    if (l.reserved_start) starts.push_back(*l.reserved_start);
    for (const auto& s : starts) {
      auto sol = vcle::oracle::solve_level(l, s);
      ASSERT_TRUE(sol) << "level " << id << " start " << s.x << "," << s.y;
      EXPECT_LT(sol->frames, static_cast<int>(kRandomTimeLimit) * 60);
    }
  }
}

TEST(Engine, LoadSetsInitialState) {
  Engine e(builtin_level(1), 0);
  EXPECT_EQ(e.clock_frames(), 100u * 60);
  EXPECT_EQ(e.score(), 0u);
  EXPECT_EQ(e.status(), GameStatus::Playing);
  EXPECT_EQ(e.pose(), builtin_level(1).starts[0]);
  Engine r(builtin_level(2), kReservedStart, 80);
  EXPECT_EQ(r.clock_frames(), 80u * 60);
  EXPECT_EQ(r.pose(), *builtin_level(2).reserved_start);
  EXPECT_THROW(Engine(builtin_level(1), kReservedStart), Error);
  EXPECT_THROW(Engine(builtin_level(1), 4), Error);
}

TEST(Engine, ScanInputIsEdgeTriggered) {
  EXPECT_EQ(scan_input({}, {Button::Up}), MoveKind::Forward);
  EXPECT_EQ(scan_input({}, {Button::Up, Button::Cross}), MoveKind::JumpForward);
  EXPECT_EQ(scan_input({Button::Cross}, {Button::Up, Button::Cross}), MoveKind::JumpForward);
  EXPECT_EQ(scan_input({Button::Up}, {Button::Up, Button::Cross}), MoveKind::JumpForward);
  EXPECT_EQ(scan_input({}, {Button::Cross}), std::nullopt);
  EXPECT_EQ(scan_input({}, {Button::Down}), std::nullopt);
  EXPECT_EQ(scan_input({Button::Up}, {Button::Up}), std::nullopt);
  EXPECT_EQ(scan_input({}, {Button::Left}), MoveKind::LookLeft);
  EXPECT_EQ(scan_input({}, {Button::Right}), MoveKind::LookRight);
}

TEST(Engine, MovingFlagLastsExactlyTheScheduledDuration) {
  Engine e(kCorridor, 0);
  EXPECT_EQ(moving_frames(e, {Button::Left}), kRotateFrames);
  EXPECT_EQ(moving_frames(e, {Button::Right}), kRotateFrames);
  EXPECT_EQ(moving_frames(e, {Button::Up}), kForwardFrames + kCollectFrames);  // coin
  EXPECT_EQ(moving_frames(e, {Button::Up}), kForwardFrames);
  EXPECT_EQ(moving_frames(e, {Button::Up}), kForwardFrames + kCollectFrames);  // key
  EXPECT_EQ(moving_frames(e, {Button::Up}), kForwardFrames);                   // goal
  EXPECT_EQ(e.status(), GameStatus::Won);
}

TEST(Engine, JumpIsOneSecondLongerThanRotation) {
  EXPECT_EQ(kJumpFrames - kRotateFrames, 60);
}

TEST(Engine, RotationsAreSafe) {
  Engine e(builtin_level(1), 0);
  auto start = e.pose();
  for (int i = 0; i < 4; ++i) run_move(e, {Button::Left});
  EXPECT_EQ(e.pose(), start);
  run_move(e, {Button::Left});
  run_move(e, {Button::Right});
  EXPECT_EQ(e.pose(), start);
  EXPECT_EQ(e.score(), 0u);
  EXPECT_EQ(e.status(), GameStatus::Playing);
  EXPECT_FALSE(e.active_sound().has_value());
}

TEST(Engine, CollectsEachObjectOnce) {
  Engine e(kCorridor, 0);
  run_move(e, {Button::Up});
  EXPECT_EQ(e.score(), 250u);
  EXPECT_EQ(e.active_sound(), SoundEvent::Coin);
  EXPECT_FALSE(e.object_present(0, 3));
  run_move(e, {Button::Left});
  run_move(e, {Button::Left});
  run_move(e, {Button::Up});
  EXPECT_EQ(e.score(), 250u);
  run_move(e, {Button::Right});
  run_move(e, {Button::Right});
  run_move(e, {Button::Up});
  EXPECT_EQ(e.score(), 250u);
  EXPECT_EQ(e.active_sound(), SoundEvent::Roll);
}

TEST(Engine, JumpOverVoid) {
  auto l = level_from("id: 1\nstart: 1,3,N\n###\n###\n#.#\n###\n");
  Engine e(l, 0);
  run_move(e, {Button::Up, Button::Cross});
  EXPECT_EQ(e.pose().x, 1);
  EXPECT_EQ(e.pose().y, 1);
  EXPECT_EQ(e.status(), GameStatus::Playing);
  EXPECT_EQ(e.active_sound(), SoundEvent::Jump);
}

TEST(Engine, JumpSkipsTheIntermediateObject) {
  auto l = level_from("id: 1\nstart: 0,2,N\n#\nC\n#\n");
  Engine e(l, 0);
  run_move(e, {Button::Up, Button::Cross});
  EXPECT_EQ(e.score(), 0u);
  EXPECT_TRUE(e.object_present(0, 1));
}

TEST(Engine, ForwardOntoVoidFallsAfterTheFallAnimation) {
  auto l = level_from("id: 1\nstart: 0,1,N\n.\n#\n");
  Engine e(l, 0);
  EXPECT_EQ(moving_frames(e, {Button::Up}), kForwardFrames + kFallFrames);
  EXPECT_EQ(e.status(), GameStatus::LostFall);
  EXPECT_EQ(e.active_sound(), SoundEvent::Lose);
}

TEST(Engine, LeavingTheGridFalls) {
  Engine e(builtin_level(1), 1);  // (0,0) facing S
  run_move(e, {Button::Right});   // W
  run_move(e, {Button::Up});
  EXPECT_EQ(e.status(), GameStatus::LostFall);
}

TEST(Engine, SpikeEndsTheGameOnArrival) {
  auto l = level_from("id: 1\nstart: 0,1,N\nS\n#\n");
  Engine e(l, 0);
  EXPECT_EQ(moving_frames(e, {Button::Up}), kForwardFrames);
  EXPECT_EQ(e.status(), GameStatus::LostSpike);
}

TEST(Engine, GoalNeedsAllKeys) {
  auto l = level_from("id: 1\nstart: 0,2,N\nK\nG\n#\n");
  Engine e(l, 0);
  run_move(e, {Button::Up});
  EXPECT_EQ(e.status(), GameStatus::Playing);
  run_move(e, {Button::Up});
  EXPECT_EQ(e.keys_remaining(), 0);
  run_move(e, {Button::Left});
  run_move(e, {Button::Left});
  run_move(e, {Button::Up});
  EXPECT_EQ(e.status(), GameStatus::Won);
  EXPECT_EQ(e.active_sound(), SoundEvent::Win);
}

TEST(Engine, ClockTimesOutMidAnimation) {
  auto l = level_from("id: 1\ntime: 1\nstart: 0,1,N\n#\n#\n");
  Engine e(l, 0);
  for (int i = 0; i < 40; ++i) e.tick({});
  EXPECT_EQ(e.clock_frames(), 20u);
  e.tick({Button::Up});
  EXPECT_TRUE(e.moving());
  for (int i = 0; i < 18; ++i) e.tick({});
  EXPECT_TRUE(e.moving());
  e.tick({});
  EXPECT_EQ(e.clock_frames(), 0u);
  EXPECT_EQ(e.status(), GameStatus::LostTimeout);
  EXPECT_FALSE(e.moving());
}

TEST(Engine, IdleClockLosesOneSecondPerSixtyTicks) {
  Engine e(builtin_level(1), 0);
  for (int i = 0; i < 60; ++i) e.tick({});
  EXPECT_EQ(e.clock_frames() / 60, 99u);
}

TEST(Engine, TerminalStateIsAbsorbing) {
  Engine e(kCorridor, 0);
  for (int i = 0; i < 4; ++i) run_move(e, {Button::Up});
  ASSERT_EQ(e.status(), GameStatus::Won);
  std::vector<std::int16_t> drain(30000);
  e.mix(drain);
  auto score = e.score();
  auto clock = e.clock_frames();
  for (int i = 0; i < 100; ++i) e.tick(i % 2 ? ButtonSet{Button::Up} : ButtonSet{});
  EXPECT_EQ(e.score(), score);
  EXPECT_EQ(e.clock_frames(), clock);
  EXPECT_FALSE(e.moving());
  EXPECT_EQ(e.pose().y, 0);
  EXPECT_EQ(e.status(), GameStatus::Won);
}

TEST(Engine, SaveLoadRoundTrip) {
  Engine e(builtin_level(1), 0);
  e.tick({Button::Up});
  for (int i = 0; i < 10; ++i) e.tick({});
  auto blob = e.save();
  Engine f(builtin_level(1), 0);
  f.load(blob);
  EXPECT_EQ(f.save(), blob);
  for (int i = 0; i < 50; ++i) {
    e.tick({});
    f.tick({});
  }
  EXPECT_EQ(f.save(), e.save());
  EXPECT_THROW(f.load(std::vector<std::uint8_t>{1, 2, 3}), Error);
}

TEST(Synth, LengthsFollowDurations) {
  EXPECT_EQ(sound_length(SoundEvent::Coin), 3308u);
  for (auto e : kAllSounds) {
    auto s = synth_sound(e);
    EXPECT_EQ(s.size(), static_cast<std::size_t>(std::llround(sound_duration_ms(e) * 22.05)));
    EXPECT_EQ(s, synth_sound(e));
    for (auto v : s) ASSERT_LE(std::abs(static_cast<int>(v)), static_cast<int>(std::lround(kMaxAmplitude * 32767)));
  }
}

TEST(Synth, CoinPeaksNearOnset) {
  auto s = synth_sound(SoundEvent::Coin);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (std::abs(s[i]) > std::abs(s[peak])) peak = i;
  EXPECT_LT(peak, s.size() / 10);
  EXPECT_GT(std::abs(s[peak]), 20000);
}

TEST(Synth, CoinIs880Hz) {
  auto s = synth_sound(SoundEvent::Coin);
  int crossings = 0;
  for (std::size_t i = 1; i < 2205; ++i) crossings += (s[i - 1] < 0) != (s[i] < 0);
  EXPECT_NEAR(crossings, 176, 3);  // 2 per cycle over 0.1 s
}

TEST(GameName, ParseAndFormat) {
  auto n = parse_game_name("kula:level2?start=reserved&time=80");
  ASSERT_TRUE(n);
  EXPECT_EQ(n->level, "level2");
  EXPECT_EQ(n->start, kReservedStart);
  EXPECT_EQ(n->time_limit_s, 80u);
  EXPECT_EQ(format_game_name(*n), "kula:level2?start=reserved&time=80");
  EXPECT_FALSE(parse_game_name("pong:level1"));
  EXPECT_FALSE(parse_game_name("kula:level1?bogus=1"));
  EXPECT_THROW(parse_game_name("kula:level1?start=x"), Error);
}

TEST(Cartridge, WritesRamMap) {
  console::Console c(cartridge_loader());
  c.run();
  c.load_game("kula:level1?start=0");
  auto u32 = [&](std::uint32_t a) { return c.ram().read_le32(a); };
  EXPECT_EQ(u32(ram::kClockFrames), 6000u);
  EXPECT_EQ(c.ram().read(ram::kX), 2);
  EXPECT_EQ(c.ram().read(ram::kY), 5);
  EXPECT_EQ(c.ram().read(ram::kOrientation), 0);
  EXPECT_EQ(c.ram().read(ram::kKeysRemaining), 1);
  EXPECT_EQ(c.ram().read(ram::kLevelId), 1);
  EXPECT_EQ(c.ram().read(ram::kTileMap), 5);
  EXPECT_EQ(c.ram().read(ram::kTileMap + 1), 6);
  EXPECT_EQ(c.ram().read(ram::kTileMap + 2 + 2), 'G');
  c.enqueue(console::ControlEvent::hold(Button::Up));
  c.step_frame();
  EXPECT_EQ(c.ram().read(ram::kMoving), 1);
  for (int i = 0; i < kForwardFrames + kCollectFrames; ++i) c.step_frame();
  EXPECT_EQ(c.ram().read(ram::kMoving), 0);
  EXPECT_EQ(u32(ram::kScore), 250u);
  EXPECT_EQ(c.ram().read(ram::kTileMap + 2 + 4 * 5 + 2), '#');
  EXPECT_EQ(u32(ram::kClockFrames), 6000u - 46);
}

TEST(Cartridge, UnknownNames) {
  console::Console c(cartridge_loader());
  c.run();
  try {
    c.load_game("kula:level1?start=reserved");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownStart);
  }
  try {
    c.load_game("kula:nowhere.lvl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownGame);
  }
}

TEST(Cartridge, RenderDependsOnlyOnState) {
  console::Console a(cartridge_loader()), b(cartridge_loader());
  a.run();
  b.run();
  a.load_game("kula:level3?start=1");
  b.load_game("kula:level3?start=1");
  a.enqueue(console::ControlEvent::hold(Button::Up));
  b.enqueue(console::ControlEvent::hold(Button::Up));
  for (int i = 0; i < 10; ++i) {
    a.step_frame();
    b.step_frame();
    if (i % 3 == 0) (void)a.screen();
  }
  EXPECT_TRUE(a.screen() == b.screen());
}
