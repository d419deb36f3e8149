#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcle/common/bytes.hpp"

namespace vcle::ipc {

// A: console -> client notifications and replies.
// B: client -> console watch configuration.
// C: client -> console control events.
// D: client -> console instructions (every request carries a u16 req-id).
enum class Channel : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

char channel_letter(Channel ch);

namespace op {
// C
inline constexpr std::uint8_t kHold = 0x01;
inline constexpr std::uint8_t kRelease = 0x02;
inline constexpr std::uint8_t kDelay = 0x03;
// B
inline constexpr std::uint8_t kWatch = 0x10;
inline constexpr std::uint8_t kClearAll = 0x11;
inline constexpr std::uint8_t kSleep = 0x12;
inline constexpr std::uint8_t kWake = 0x13;
inline constexpr std::uint8_t kBreak = 0x14;  // extension: (id u16, enable u8)
// D
inline constexpr std::uint8_t kLoadGame = 0x20;
inline constexpr std::uint8_t kLoadState = 0x21;
inline constexpr std::uint8_t kSaveState = 0x22;
inline constexpr std::uint8_t kFreeze = 0x23;
inline constexpr std::uint8_t kUnfreeze = 0x24;
inline constexpr std::uint8_t kSetSpeed = 0x25;
inline constexpr std::uint8_t kRead = 0x26;
inline constexpr std::uint8_t kWrite = 0x27;
inline constexpr std::uint8_t kGetScreen = 0x28;
inline constexpr std::uint8_t kAudioStart = 0x29;
inline constexpr std::uint8_t kAudioStop = 0x2A;
inline constexpr std::uint8_t kKill = 0x2B;
// A
inline constexpr std::uint8_t kMemChanged = 0x80;
inline constexpr std::uint8_t kEventDone = 0x81;
inline constexpr std::uint8_t kReply = 0x82;
}  // namespace op

bool opcode_valid_for(Channel ch, std::uint8_t opcode);
std::string_view opcode_name(std::uint8_t opcode);

inline constexpr std::size_t kMaxPayload = 16u * 1024u * 1024u;

struct Message {
  std::uint8_t opcode = 0;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

// [length u32 BE = 1 + |payload|][opcode][payload]
Bytes encode(const Message& msg);
void encode_into(const Message& msg, Bytes& out);

// Incremental decoder for one channel's byte stream. Partial trailing frames
// wait for more bytes. Errors are thrown after the offending frame has been
// consumed, so the caller may keep decoding.
class FrameDecoder {
 public:
  explicit FrameDecoder(std::optional<Channel> channel = std::nullopt) : channel_(channel) {}

  void feed(std::span<const std::uint8_t> bytes);
  // Next complete frame, validated against the channel's opcode set.
  std::optional<Message> next();
  // Next complete frame without opcode validation.
  std::optional<Message> next_raw();

  std::size_t buffered() const { return buf_.size() - pos_; }

 private:
  std::optional<Channel> channel_;
  Bytes buf_;
  std::size_t pos_ = 0;
  bool poisoned_ = false;
};

// Typed constructors for every opcode.
namespace msg {
Message hold(std::uint8_t button);
Message release(std::uint8_t button);
Message delay(std::uint32_t ms);
Message watch(std::uint16_t id, std::uint32_t addr, std::uint16_t len);
Message clear_all();
Message sleep(std::uint16_t id);
Message wake(std::uint16_t id);
Message set_break(std::uint16_t id, bool enable);
Message load_game(std::uint16_t req, std::string_view name);
Message load_state(std::uint16_t req, std::string_view name);
Message save_state(std::uint16_t req, std::string_view name);
Message freeze(std::uint16_t req);
Message unfreeze(std::uint16_t req);
Message set_speed(std::uint16_t req, std::uint32_t percent);
Message read(std::uint16_t req, std::uint32_t addr, std::uint16_t len);
Message write(std::uint16_t req, std::uint32_t addr, std::uint8_t value);
Message get_screen(std::uint16_t req);
Message audio_start(std::uint16_t req);
Message audio_stop(std::uint16_t req);
Message kill(std::uint16_t req);
Message mem_changed(std::uint16_t id, std::uint32_t addr, std::span<const std::uint8_t> bytes);
Message event_done(std::uint16_t req, std::uint8_t status);
Message reply(std::uint16_t req, std::span<const std::uint8_t> payload);
}  // namespace msg

}  // namespace vcle::ipc
