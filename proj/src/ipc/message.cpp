#include "vcle/ipc/message.hpp"

#include "vcle/common/error.hpp"

namespace vcle::ipc {

char channel_letter(Channel ch) { return static_cast<char>('a' + static_cast<int>(ch)); }

bool opcode_valid_for(Channel ch, std::uint8_t opcode) {
  switch (ch) {
    case Channel::A: return opcode >= op::kMemChanged && opcode <= op::kReply;
    case Channel::B: return opcode >= op::kWatch && opcode <= op::kBreak;
    case Channel::C: return opcode >= op::kHold && opcode <= op::kDelay;
    case Channel::D: return opcode >= op::kLoadGame && opcode <= op::kKill;
  }
  return false;
}

std::string_view opcode_name(std::uint8_t opcode) {
  switch (opcode) {
    case op::kHold: return "HOLD";
    case op::kRelease: return "RELEASE";
    case op::kDelay: return "DELAY";
    case op::kWatch: return "WATCH";
    case op::kClearAll: return "CLEAR_ALL";
    case op::kSleep: return "SLEEP";
    case op::kWake: return "WAKE";
    case op::kBreak: return "BREAK";
    case op::kLoadGame: return "LOAD_GAME";
    case op::kLoadState: return "LOAD_STATE";
    case op::kSaveState: return "SAVE_STATE";
    case op::kFreeze: return "FREEZE";
    case op::kUnfreeze: return "UNFREEZE";
    case op::kSetSpeed: return "SET_SPEED";
    case op::kRead: return "READ";
    case op::kWrite: return "WRITE";
    case op::kGetScreen: return "GET_SCREEN";
    case op::kAudioStart: return "AUDIO_START";
    case op::kAudioStop: return "AUDIO_STOP";
    case op::kKill: return "KILL";
    case op::kMemChanged: return "MEM_CHANGED";
    case op::kEventDone: return "EVENT_DONE";
    case op::kReply: return "REPLY";
  }
  return "UNKNOWN";
}

void encode_into(const Message& m, Bytes& out) {
  if (m.payload.size() > kMaxPayload) throw Error(Errc::FrameTooLarge, "payload exceeds 16 MiB");
  const auto len = static_cast<std::uint32_t>(m.payload.size() + 1);
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.push_back(m.opcode);
  out.insert(out.end(), m.payload.begin(), m.payload.end());
}

Bytes encode(const Message& m) {
  Bytes out;
  out.reserve(m.payload.size() + 5);
  encode_into(m, out);
  return out;
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (pos_ > 0 && pos_ >= buf_.size() / 2) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameDecoder::next_raw() {
  if (poisoned_) throw Error(Errc::FrameTooLarge, "stream desynchronised by an oversize frame");
  if (buffered() < 4) return std::nullopt;
  const auto* p = buf_.data() + pos_;
  const std::uint32_t len = (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
                            (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
  if (len < 1) {
    pos_ += 4;
    throw Error(Errc::MalformedFrame, "zero-length frame");
  }
  if (len > kMaxPayload + 1) {
    poisoned_ = true;
    throw Error(Errc::FrameTooLarge, "frame length " + std::to_string(len));
  }
  if (buffered() < 4 + static_cast<std::size_t>(len)) return std::nullopt;
  Message m;
  m.opcode = p[4];
  m.payload.assign(p + 5, p + 4 + len);
  pos_ += 4 + len;
  return m;
}

std::optional<Message> FrameDecoder::next() {
  auto m = next_raw();
  if (m && channel_ && !opcode_valid_for(*channel_, m->opcode)) {
    throw Error(Errc::UnknownOpcode, std::string("opcode ") + std::to_string(m->opcode) + " on channel " +
                                         channel_letter(*channel_));
  }
  return m;
}

namespace msg {

namespace {
Message make(std::uint8_t opcode, ByteWriter w = {}) { return Message{opcode, std::move(w).take()}; }
}  // namespace

Message hold(std::uint8_t button) { return make(op::kHold, ByteWriter().u8(button)); }
Message release(std::uint8_t button) { return make(op::kRelease, ByteWriter().u8(button)); }
Message delay(std::uint32_t ms) { return make(op::kDelay, ByteWriter().u32(ms)); }
Message watch(std::uint16_t id, std::uint32_t addr, std::uint16_t len) {
  return make(op::kWatch, ByteWriter().u16(id).u32(addr).u16(len));
}
Message clear_all() { return make(op::kClearAll); }
Message sleep(std::uint16_t id) { return make(op::kSleep, ByteWriter().u16(id)); }
Message wake(std::uint16_t id) { return make(op::kWake, ByteWriter().u16(id)); }
Message set_break(std::uint16_t id, bool enable) {
  return make(op::kBreak, ByteWriter().u16(id).u8(enable ? 1 : 0));
}
Message load_game(std::uint16_t req, std::string_view name) {
  return make(op::kLoadGame, ByteWriter().u16(req).str(name));
}
Message load_state(std::uint16_t req, std::string_view name) {
  return make(op::kLoadState, ByteWriter().u16(req).str(name));
}
Message save_state(std::uint16_t req, std::string_view name) {
  return make(op::kSaveState, ByteWriter().u16(req).str(name));
}
Message freeze(std::uint16_t req) { return make(op::kFreeze, ByteWriter().u16(req)); }
Message unfreeze(std::uint16_t req) { return make(op::kUnfreeze, ByteWriter().u16(req)); }
Message set_speed(std::uint16_t req, std::uint32_t percent) {
  return make(op::kSetSpeed, ByteWriter().u16(req).u32(percent));
}
Message read(std::uint16_t req, std::uint32_t addr, std::uint16_t len) {
  return make(op::kRead, ByteWriter().u16(req).u32(addr).u16(len));
}
Message write(std::uint16_t req, std::uint32_t addr, std::uint8_t value) {
  return make(op::kWrite, ByteWriter().u16(req).u32(addr).u8(value));
}
Message get_screen(std::uint16_t req) { return make(op::kGetScreen, ByteWriter().u16(req)); }
Message audio_start(std::uint16_t req) { return make(op::kAudioStart, ByteWriter().u16(req)); }
Message audio_stop(std::uint16_t req) { return make(op::kAudioStop, ByteWriter().u16(req)); }
Message kill(std::uint16_t req) { return make(op::kKill, ByteWriter().u16(req)); }
Message mem_changed(std::uint16_t id, std::uint32_t addr, std::span<const std::uint8_t> bytes) {
  return make(op::kMemChanged,
              ByteWriter().u16(id).u32(addr).u16(static_cast<std::uint16_t>(bytes.size())).bytes(bytes));
}
Message event_done(std::uint16_t req, std::uint8_t status) {
  return make(op::kEventDone, ByteWriter().u16(req).u8(status));
}
Message reply(std::uint16_t req, std::span<const std::uint8_t> payload) {
  return make(op::kReply, ByteWriter().u16(req).bytes(payload));
}

}  // namespace msg

}  // namespace vcle::ipc
