#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include "vcle/common/bytes.hpp"
#include "vcle/ipc/message.hpp"

namespace vcle::ipc {

// Console-side end of a session's four channels.
class ServerLink {
 public:
  virtual ~ServerLink() = default;
  // Append whatever bytes are currently available on B, C or D without
  // blocking. Returns false once the peer closed the channel and it is drained.
  virtual bool drain(Channel ch, Bytes& out) = 0;
  // Block until inbound data may be available, the peer hung up, or timeout.
  virtual void wait(std::chrono::nanoseconds timeout) = 0;
  // Write to channel A.
  virtual void send(std::span<const std::uint8_t> bytes) = 0;
  virtual void close() = 0;
};

// Client-side end.
class ClientLink {
 public:
  virtual ~ClientLink() = default;
  virtual void send(Channel ch, std::span<const std::uint8_t> bytes) = 0;
  // Blocking read from channel A. Returns 0 once the channel is closed.
  virtual std::size_t receive(std::span<std::uint8_t> buf) = 0;
  virtual void close() = 0;
};

// In-process transport: four byte queues guarded by one mutex.
std::pair<std::unique_ptr<ServerLink>, std::unique_ptr<ClientLink>> make_memory_link();

// Reference transport: FIFOs {dir}/a, {dir}/b, {dir}/c, {dir}/d.
void create_fifo_session(const std::filesystem::path& dir);
void remove_fifo_session(const std::filesystem::path& dir);
// Both block until the peer connects.
std::unique_ptr<ServerLink> open_fifo_server(const std::filesystem::path& dir);
std::unique_ptr<ClientLink> open_fifo_client(const std::filesystem::path& dir);

// Per-channel byte dumps as seen by the client (A received, B/C/D sent).
struct ChannelDumps {
  std::mutex mu;
  std::array<Bytes, 4> bytes;

  std::array<Bytes, 4> snapshot() {
    std::lock_guard lock(mu);
    return bytes;
  }
};

std::unique_ptr<ClientLink> make_recording_link(std::unique_ptr<ClientLink> inner,
                                                std::shared_ptr<ChannelDumps> dumps);

}  // namespace vcle::ipc
