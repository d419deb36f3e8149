#pragma once

#include <atomic>
#include <cstdint>

#include "vcle/console/console.hpp"
#include "vcle/ipc/link.hpp"
#include "vcle/ipc/message.hpp"

namespace vcle::ipc {

struct ServerOptions {
  // Run frames as fast as possible instead of pacing at speed% of 60 fps.
  bool fast = false;
  bool start_frozen = false;
};

// Binds a Console to a ServerLink. Inbound channels are drained at frame
// boundaries in the order D, B, C and applied in the order B, C, D, so any
// watch or control frame written before an instruction is applied before it.
class ConsoleServer {
 public:
  ConsoleServer(console::Console& console, ServerLink& link, ServerOptions options = {});

  // Runs until KILL, client hang-up, or stop(). Starts a console session if
  // none is active and kills it on exit.
  void serve();
  void stop() { stop_.store(true); }

  std::uint64_t decode_errors() const { return decode_errors_; }

 private:
  bool pump();
  void handle_b(const Message& m);
  void handle_c(const Message& m);
  bool handle_d(const Message& m);
  void flush_hits();
  void send(const Message& m);

  console::Console& console_;
  ServerLink& link_;
  ServerOptions options_;
  FrameDecoder dec_b_{Channel::B};
  FrameDecoder dec_c_{Channel::C};
  FrameDecoder dec_d_{Channel::D};
  Bytes out_;
  bool ram_touched_ = false;
  std::atomic<bool> stop_{false};
  std::uint64_t decode_errors_ = 0;
};

}  // namespace vcle::ipc
