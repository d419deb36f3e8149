#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "vcle/common/error.hpp"
#include "vcle/common/hash.hpp"
#include "vcle/console/console.hpp"
#include "vcle/console/snapshot.hpp"
#include "vcle/kula/cartridge.hpp"

using namespace vcle;
using namespace vcle::console;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Ok;
}

struct Fixture : ::testing::Test {
  Console console{kula::cartridge_loader()};
  void SetUp() override {
    console.run();
    console.load_game("kula:level1?start=0");
  }
  std::uint64_t frame_hash() {
    Fnv1a h;
    h.update(console.ram().all());
    h.update(console.screen().bytes());
    auto a = console.last_frame_audio();
    h.update(std::span(reinterpret_cast<const std::uint8_t*>(a.data()), a.size() * 2));
    return h.digest();
  }
};

using ConsoleTest = Fixture;

}  // namespace

TEST(ConsoleTiming, SamplesPerFrameAccumulate) {
  std::size_t total = 0;
  for (std::uint64_t f = 0; f < 60; ++f) {
    auto n = samples_for_frame(f);
    EXPECT_TRUE(n == 367 || n == 368);
    total += n;
  }
  EXPECT_EQ(total, 22050u);
  total = 0;
  for (std::uint64_t f = 0; f < 6000; ++f) total += samples_for_frame(f);
  EXPECT_EQ(total, 2205000u);
}

TEST(ConsoleTiming, DelayRoundsToFrames) {
  EXPECT_EQ(delay_frames(0), 0u);
  EXPECT_EQ(delay_frames(50), 3u);
  EXPECT_EQ(delay_frames(1000), 60u);
  EXPECT_EQ(delay_frames(8), 0u);
  EXPECT_EQ(delay_frames(9), 1u);
}

TEST(ConsoleLifecycle, RunKillErrors) {
  Console c(kula::cartridge_loader());
  EXPECT_EQ(code_of([&] { c.kill(); }), Errc::NotRunning);
  EXPECT_EQ(code_of([&] { c.step_frame(); }), Errc::NotRunning);
  c.run();
  EXPECT_EQ(code_of([&] { c.run(); }), Errc::AlreadyRunning);
  EXPECT_EQ(code_of([&] { c.load_game("pong"); }), Errc::UnknownGame);
  EXPECT_EQ(code_of([&] { c.set_speed(0); }), Errc::InvalidSpeed);
  c.kill();
  EXPECT_FALSE(c.running());
}

TEST_F(ConsoleTest, FrameCounterLivesInRam) {
  for (int i = 0; i < 5; ++i) console.step_frame();
  EXPECT_EQ(console.frame_counter(), 5u);
  EXPECT_EQ(console.ram().read_le32(kFrameCounterAddr), 5u);
}

TEST_F(ConsoleTest, FrozenConsoleDoesNotAdvance) {
  console.set_frozen(true);
  console.step_frame();
  EXPECT_EQ(console.frame_counter(), 0u);
  console.set_frozen(false);
  console.step_frame();
  EXPECT_EQ(console.frame_counter(), 1u);
}

TEST_F(ConsoleTest, ControlQueueHonoursDelays) {
  console.enqueue(ControlEvent::hold(Button::Up));
  console.enqueue(ControlEvent::delay(50));
  console.enqueue(ControlEvent::release(Button::Up));
  console.step_frame();
  EXPECT_TRUE(console.held().contains(Button::Up));
  console.step_frame();
  console.step_frame();
  EXPECT_TRUE(console.held().contains(Button::Up));
  console.step_frame();
  EXPECT_FALSE(console.held().contains(Button::Up));
  EXPECT_EQ(console.pending_controls(), 0u);
}

TEST_F(ConsoleTest, ReleaseInSameFrameIsDeferred) {
  console.enqueue(ControlEvent::hold(Button::Left));
  console.enqueue(ControlEvent::release(Button::Left));
  console.step_frame();
  EXPECT_TRUE(console.held().contains(Button::Left));
  EXPECT_EQ(console.ram().read(kula::ram::kMoving), 1);
  console.step_frame();
  EXPECT_FALSE(console.held().contains(Button::Left));
}

TEST_F(ConsoleTest, RamAccessIsBoundsChecked) {
  EXPECT_EQ(code_of([&] { console.read_bytes(kRamSize - 1, 2); }), Errc::OutOfBounds);
  EXPECT_EQ(code_of([&] { console.write_byte(kRamSize, 1); }), Errc::OutOfBounds);
  EXPECT_EQ(console.read_bytes(kRamSize - 1, 1).size(), 1u);
  console.write_byte(0x100, 0xAB);
  EXPECT_EQ(console.read_bytes(0x100, 1)[0], 0xAB);
}

TEST_F(ConsoleTest, WatchFiresOncePerChange) {
  console.add_watch(1, kFrameCounterAddr, 4);
  console.add_watch(2, kula::ram::kScore, 4);
  console.step_frame();
  auto hits = console.take_hits();
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].id, 1);
  EXPECT_EQ(load_le32(hits[0].bytes.data()), 1u);
  console.step_frame();
  EXPECT_EQ(console.take_hits().size(), 1u);
  EXPECT_EQ(code_of([&] { console.add_watch(3, kRamSize - 2, 4); }), Errc::OutOfBounds);
  EXPECT_EQ(code_of([&] { console.sleep_watch(9); }), Errc::UnknownWatch);
}

TEST_F(ConsoleTest, SleepingWatchIsSilentAndRebaselinesOnWake) {
  console.add_watch(1, 0x200, 1);
  console.sleep_watch(1);
  console.write_byte(0x200, 5);
  console.check_watches();
  EXPECT_TRUE(console.take_hits().empty());
  console.wake_watch(1);
  console.check_watches();
  EXPECT_TRUE(console.take_hits().empty());
  console.write_byte(0x200, 6);
  console.check_watches();
  EXPECT_EQ(console.take_hits().size(), 1u);
}

TEST_F(ConsoleTest, BreakWatchFreezesAtFrameEnd) {
  console.add_watch(1, kula::ram::kMoving, 1);
  console.set_watch_break(1, true);
  console.enqueue(ControlEvent::hold(Button::Right));
  console.step_frame();
  EXPECT_TRUE(console.frozen());
  EXPECT_EQ(console.ram().read(kula::ram::kMoving), 1);
  console.step_frame();
  EXPECT_EQ(console.frame_counter(), 1u);
  console.set_frozen(false);
  int frames = 0;
  while (!console.frozen()) {
    console.step_frame();
    ++frames;
  }
  EXPECT_EQ(frames, kula::kRotateFrames);
  EXPECT_EQ(console.ram().read(kula::ram::kMoving), 0);
}

TEST_F(ConsoleTest, AudioRecordingErrors) {
  EXPECT_EQ(code_of([&] { console.stop_audio_recording(); }), Errc::NotRecording);
  console.start_audio_recording();
  EXPECT_EQ(code_of([&] { console.start_audio_recording(); }), Errc::AlreadyRecording);
  for (int i = 0; i < 60; ++i) console.step_frame();
  EXPECT_EQ(console.stop_audio_recording().size(), 22050u);
}

TEST_F(ConsoleTest, SnapshotRestoreIsBitExact) {
  console.enqueue(ControlEvent::hold(Button::Up));
  for (int i = 0; i < 20; ++i) console.step_frame();
  console.save_snapshot("mid");
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 60; ++i) {
    console.step_frame();
    first.push_back(frame_hash());
  }
  console.load_snapshot("mid");
  EXPECT_EQ(console.frame_counter(), 20u);
  for (int i = 0; i < 60; ++i) {
    console.step_frame();
    EXPECT_EQ(frame_hash(), first[i]) << "frame " << i;
  }
  EXPECT_EQ(code_of([&] { console.load_snapshot("nope"); }), Errc::UnknownState);
}

TEST_F(ConsoleTest, SnapshotEncodingRoundTrips) {
  console.enqueue(ControlEvent::hold(Button::Up));
  console.enqueue(ControlEvent::delay(100));
  console.enqueue(ControlEvent::release(Button::Up));
  console.start_audio_recording();
  for (int i = 0; i < 3; ++i) console.step_frame();
  auto snap = console.capture();
  auto bytes = encode_snapshot(snap);
  ASSERT_GE(bytes.size(), 6u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "VCLE");
  auto back = decode_snapshot(bytes);
  EXPECT_EQ(encode_snapshot(back), bytes);
  EXPECT_EQ(back.pending_controls.size(), snap.pending_controls.size());
  EXPECT_EQ(back.recorded, snap.recorded);
  bytes[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_snapshot(bytes); }), Errc::BadSnapshot);
}

TEST_F(ConsoleTest, SnapshotFilesSurviveANewConsole) {
  auto dir = std::filesystem::temp_directory_path() / "vcle_console_test_snap";
  std::filesystem::create_directories(dir);
  console.set_snapshot_dir(dir);
  for (int i = 0; i < 7; ++i) console.step_frame();
  console.save_snapshot("disk");
  auto ram = console.read_bytes(0, 0x20000);

  Console other(kula::cartridge_loader());
  other.run();
  other.set_snapshot_dir(dir);
  other.load_snapshot("disk");
  EXPECT_EQ(other.frame_counter(), 7u);
  EXPECT_EQ(other.read_bytes(0, 0x20000), ram);
  EXPECT_EQ(other.game(), "kula:level1?start=0");
  std::filesystem::remove_all(dir);
}

TEST_F(ConsoleTest, LoadGameReboots) {
  for (int i = 0; i < 10; ++i) console.step_frame();
  console.load_game("kula:level2?start=1");
  EXPECT_EQ(console.frame_counter(), 0u);
  EXPECT_EQ(console.ram().read(kula::ram::kLevelId), 2);
}

TEST_F(ConsoleTest, IdleFramesOnlyChangeClockDrivenPixels) {
  auto before = console.screen();
  console.step_frame();
  auto after = console.screen();
  int diff = 0;
  for (int y = 20; y < kScreenHeight; ++y)
    for (int x = 0; x < kScreenWidth; ++x) diff += !(before.get(x, y) == after.get(x, y));
  EXPECT_EQ(diff, 0);
}
