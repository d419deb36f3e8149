#include "vcle/harness/protocol.hpp"

#include <algorithm>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include "json.hpp"
#include <sstream>

#include "vcle/client/console_client.hpp"
#include "vcle/common/error.hpp"
#include "vcle/ipc/link.hpp"
#include "vcle/kula/cartridge.hpp"

namespace vcle::harness {

namespace {

constexpr char kChannelNames[4] = {'A', 'B', 'C', 'D'};

// Counts frame-counter notifications so the script can run exact frames.
class FrameStepper {
 public:
  explicit FrameStepper(client::ConsoleClient& c) : c_(c) {
    id_ = c_.add_memory_listener(console::kFrameCounterAddr, 4, [this](const client::MemoryChange&) {
      std::lock_guard lock(mu_);
      ++frames_;
      cv_.notify_all();
    });
    c_.set_listener_break(id_, true);
  }

  void step(int n) {
    for (int i = 0; i < n; ++i) {
      std::unique_lock lock(mu_);
      const auto want = frames_ + 1;
      lock.unlock();
      c_.unfreeze();
      lock.lock();
      cv_.wait(lock, [&] { return frames_ >= want; });
    }
  }

 private:
  client::ConsoleClient& c_;
  std::uint16_t id_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
  std::uint64_t frames_ = 0;
};

void controls_session(client::ConsoleClient& c) {
  using console::Button;
  c.load_game("kula:level1?start=0");
  FrameStepper stepper(c);
  c.touch_button(Button::Up);
  stepper.step(50);
  c.hold_button(Button::Cross);
  c.hold_button(Button::Up);
  c.delay_button(50);
  c.release_button(Button::Cross);
  c.release_button(Button::Up);
  stepper.step(80);
  c.touch_button(Button::Left, 100);
  stepper.step(30);
  c.read_bytes(kula::ram::kBase, kula::ram::kBlockSize);
}

void memory_session(client::ConsoleClient& c) {
  c.load_game("kula:level2?start=1&time=80");
  c.read_bytes(kula::ram::kBase, kula::ram::kBlockSize);
  auto a = c.add_memory_listener(0x400, 4, [](const client::MemoryChange&) {});
  c.add_memory_listener(0x402, 2, [](const client::MemoryChange&) {});
  c.write_byte(0x401, 0x5A);
  c.write_byte(0x403, 0xA5);
  c.flush_notifications();
  c.sleep_memory_listener(a);
  c.write_byte(0x400, 1);
  c.wake_memory_listener(a);
  c.write_byte(0x400, 2);
  c.flush_notifications();
  c.clear_memory_listeners();
  c.write_byte(0x400, 3);
  c.set_speed(200);
  c.read_bytes(0x3F0, 32);
  c.read_bytes(kula::ram::kTileMap, 51);
  try {
    c.read_bytes(console::kRamSize - 1, 2);
  } catch (const Error&) {
  }
  try {
    c.load_state("missing");
  } catch (const Error&) {
  }
}

void snapshot_session(client::ConsoleClient& c) {
  using console::Button;
  c.load_game("kula:level3?start=1");
  FrameStepper stepper(c);
  c.save_state("origin");
  c.start_recording_audio();
  c.touch_button(Button::Up);
  stepper.step(40);
  c.stop_recording_audio();
  c.get_screen();
  c.load_state("origin");
  c.read_bytes(kula::ram::kBase, kula::ram::kBlockSize);
  c.touch_button(Button::Right);
  stepper.step(20);
  c.read_bytes(kula::ram::kBase, kula::ram::kBlockSize);
}

}  // namespace

const std::vector<std::string>& session_names() {
  static const std::vector<std::string> names = {"controls", "memory", "snapshot"};
  return names;
}

Transcript run_session(const std::string& name) {
  void (*script)(client::ConsoleClient&) = nullptr;
  if (name == "controls") script = controls_session;
  else if (name == "memory") script = memory_session;
  else if (name == "snapshot") script = snapshot_session;
  else throw Error(Errc::ScriptError, "unknown protocol session '" + name + "'");
  client::ConsoleOptions o;
  o.fast = true;
  o.start_frozen = true;
  o.loader = kula::cartridge_loader();
  o.dumps = std::make_shared<ipc::ChannelDumps>();
  client::ConsoleClient c(o);
  c.run();
  script(c);
  c.flush_notifications();
  c.kill();
  return {name, o.dumps->snapshot()};
}

std::string transcript_to_json(const Transcript& t) {
  nlohmann::ordered_json j;
  j["session"] = t.session;
  for (int i = 0; i < 4; ++i) j["channels"][std::string(1, kChannelNames[i])] = to_hex(t.channels[static_cast<std::size_t>(i)]);
  return j.dump(2) + "\n";
}

Transcript transcript_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    Transcript t;
    t.session = j.at("session").get<std::string>();
    for (int i = 0; i < 4; ++i)
      t.channels[static_cast<std::size_t>(i)] =
          from_hex(j.at("channels").at(std::string(1, kChannelNames[i])).get<std::string>());
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadFrame, std::string("bad transcript: ") + e.what());
  }
}

Transcript load_transcript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return transcript_from_json(text.str());
}

void save_transcript(const std::filesystem::path& path, const Transcript& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << transcript_to_json(t);
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::vector<ChannelDiff> compare_transcripts(const Transcript& expected, const Transcript& actual) {
  std::vector<ChannelDiff> diffs;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& e = expected.channels[i];
    const auto& a = actual.channels[i];
    auto [pe, pa] = std::mismatch(e.begin(), e.end(), a.begin(), a.end());
    if (pe == e.end() && pa == a.end()) continue;
    diffs.push_back({kChannelNames[i], static_cast<std::size_t>(pe - e.begin()), e.size(), a.size()});
  }
  return diffs;
}

std::vector<std::filesystem::path> record_sessions(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& name : session_names()) {
    auto path = dir / (name + ".json");
    save_transcript(path, run_session(name));
    paths.push_back(path);
  }
  return paths;
}

std::vector<VerifyResult> verify_transcripts(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& e : std::filesystem::directory_iterator(path))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(Errc::IoError, "no transcripts in " + path.string());
  } else {
    files.push_back(path);
  }
  std::vector<VerifyResult> results;
  for (const auto& f : files) {
    auto expected = load_transcript(f);
    auto actual = run_session(expected.session);
    results.push_back({f, expected.session, compare_transcripts(expected, actual)});
  }
  return results;
}

}  // namespace vcle::harness
