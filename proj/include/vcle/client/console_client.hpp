#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "vcle/common/bytes.hpp"
#include "vcle/console/cartridge.hpp"
#include "vcle/console/types.hpp"
#include "vcle/ipc/link.hpp"
#include "vcle/ipc/message.hpp"

namespace vcle::console {
class Console;
}
namespace vcle::ipc {
class ConsoleServer;
}

namespace vcle::client {

using console::Button;

struct MemoryChange {
  std::uint16_t id = 0;
  std::uint32_t addr = 0;
  Bytes bytes;
};

// Invoked on the client's notification thread, in channel-A order. Must not
// block and must not call flush_notifications().
using Subscriber = std::function<void(const MemoryChange&)>;

struct Screen {
  int width = 0;
  int height = 0;
  Bytes rgb;  // width*height*3, rows top to bottom
};

struct AudioClip {
  std::uint32_t sample_rate = 0;
  std::vector<std::int16_t> samples;
};

struct ConsoleOptions {
  // Pace frames at speed% of 60 fps, or run unthrottled.
  bool fast = false;
  bool start_frozen = false;
  std::optional<std::filesystem::path> snapshot_dir;
  // Attach to a console already serving this FIFO session directory instead of
  // launching one in-process.
  std::optional<std::filesystem::path> fifo_session;
  // Record every byte crossing the four channels.
  std::shared_ptr<ipc::ChannelDumps> dumps;
  // Cartridges available to an in-process console.
  console::CartridgeLoader loader;
};

// The Console API: lifecycle, controller, RAM listeners, audio/visual
// capture. Thread-safe; D requests are correlated with replies by req-id.
class ConsoleClient {
 public:
  explicit ConsoleClient(ConsoleOptions options = {});
  ~ConsoleClient();
  ConsoleClient(const ConsoleClient&) = delete;
  ConsoleClient& operator=(const ConsoleClient&) = delete;

  void run();
  void kill();
  bool running() const;

  void hold_button(Button b);
  void release_button(Button b);
  void touch_button(Button b, std::uint32_t hold_ms = 50);
  void delay_button(std::uint32_t ms);

  Bytes read_bytes(std::uint32_t addr, std::uint32_t len);
  void write_byte(std::uint32_t addr, std::uint8_t value);

  std::uint16_t add_memory_listener(std::uint32_t addr, std::uint16_t len, Subscriber subscriber);
  void clear_memory_listeners();
  void sleep_memory_listener(std::uint16_t id);
  void wake_memory_listener(std::uint16_t id);
  // Freeze the console at the end of any frame in which this listener fires.
  void set_listener_break(std::uint16_t id, bool enabled);

  Screen get_screen();
  void start_recording_audio();
  AudioClip stop_recording_audio();

  void freeze();
  void unfreeze();
  std::uint32_t speed() const;
  void set_speed(std::uint32_t percent);

  void load_game(const std::string& name);
  void save_state(const std::string& name);
  void load_state(const std::string& name);

  // Returns once every notification the console emitted before this call has
  // been delivered to its subscriber.
  void flush_notifications();

 private:
  struct Response {
    std::uint8_t status = 0;
    Bytes payload;
    std::uint64_t notify_seq = 0;
  };
  struct Listener {
    Subscriber subscriber;
    bool awake = true;
  };

  Response request(const std::function<ipc::Message(std::uint16_t)>& make);
  void send(ipc::Channel ch, const ipc::Message& m);
  void send_many(ipc::Channel ch, std::initializer_list<ipc::Message> ms);
  void require_running() const;
  void reader_loop();
  void notifier_loop();
  void shutdown();

  ConsoleOptions options_;

  // In-process console, when not attached over FIFOs.
  std::unique_ptr<console::Console> console_;
  std::unique_ptr<ipc::ServerLink> server_link_;
  std::unique_ptr<ipc::ConsoleServer> server_;
  std::thread server_thread_;

  std::unique_ptr<ipc::ClientLink> link_;
  std::thread reader_thread_;
  std::thread notifier_thread_;

  mutable std::mutex mu_;
  std::condition_variable reply_cv_;
  std::condition_variable notify_cv_;
  std::condition_variable delivered_cv_;
  std::mutex send_mu_;

  bool running_ = false;
  bool closed_ = false;
  bool stopping_ = false;
  std::uint16_t next_req_ = 1;
  std::map<std::uint16_t, std::optional<Response>> pending_;
  std::map<std::uint16_t, Listener> listeners_;
  std::uint16_t next_watch_ = 1;
  std::uint32_t speed_ = 100;

  std::deque<MemoryChange> notify_queue_;
  std::uint64_t received_seq_ = 0;
  std::uint64_t delivered_seq_ = 0;
};

}  // namespace vcle::client
