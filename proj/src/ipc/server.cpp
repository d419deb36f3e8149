#include "vcle/ipc/server.hpp"

#include <chrono>
#include <string>

#include "vcle/common/error.hpp"

namespace vcle::ipc {

using Clock = std::chrono::steady_clock;

ConsoleServer::ConsoleServer(console::Console& console, ServerLink& link, ServerOptions options)
    : console_(console), link_(link), options_(options) {}

void ConsoleServer::send(const Message& m) { encode_into(m, out_); }

void ConsoleServer::flush_hits() {
  for (const auto& hit : console_.take_hits()) send(msg::mem_changed(hit.id, hit.addr, hit.bytes));
  if (!out_.empty()) {
    link_.send(out_);
    out_.clear();
  }
}

void ConsoleServer::serve() {
  if (!console_.running()) console_.run();
  if (options_.start_frozen) console_.set_frozen(true);

  auto deadline = Clock::now();
  try {
    while (!stop_.load()) {
      if (!pump()) break;
      if (console_.frozen()) {
        link_.wait(std::chrono::milliseconds(100));
        deadline = Clock::now();
        continue;
      }
      if (!options_.fast) {
        auto now = Clock::now();
        if (now < deadline) {
          link_.wait(deadline - now);
          continue;
        }
        if (now - deadline > std::chrono::milliseconds(250)) deadline = now;
      }
      console_.step_frame();
      flush_hits();
      deadline += console_.frame_period();
    }
  } catch (const Error&) {
    // Channel A is gone; nothing left to report to.
  }
  if (console_.running()) console_.kill();
  link_.close();
}

bool ConsoleServer::pump() {
  Bytes d, b, c;
  const bool d_open = link_.drain(Channel::D, d);
  link_.drain(Channel::B, b);
  link_.drain(Channel::C, c);
  dec_d_.feed(d);
  dec_b_.feed(b);
  dec_c_.feed(c);

  auto for_each = [this](FrameDecoder& dec, auto&& fn) {
    for (;;) {
      try {
        auto m = dec.next();
        if (!m) return true;
        if (!fn(*m)) return false;
      } catch (const Error& e) {
        ++decode_errors_;
        if (e.code() == Errc::FrameTooLarge) return true;
      }
    }
  };

  for_each(dec_b_, [this](const Message& m) {
    handle_b(m);
    return true;
  });
  for_each(dec_c_, [this](const Message& m) {
    handle_c(m);
    return true;
  });

  bool alive = true;
  for (;;) {
    std::optional<Message> m;
    try {
      m = dec_d_.next_raw();
    } catch (const Error& e) {
      ++decode_errors_;
      if (e.code() == Errc::FrameTooLarge) break;
      continue;
    }
    if (!m) break;
    if (!handle_d(*m)) {
      alive = false;
      break;
    }
  }

  if (alive && ram_touched_) console_.check_watches();
  ram_touched_ = false;
  if (alive) flush_hits();
  return alive && d_open;
}

void ConsoleServer::handle_b(const Message& m) {
  try {
    ByteReader r(m.payload);
    switch (m.opcode) {
      case op::kWatch: {
        auto id = r.u16();
        auto addr = r.u32();
        auto len = r.u16();
        console_.add_watch(id, addr, len);
        break;
      }
      case op::kClearAll: console_.clear_watches(); break;
      case op::kSleep: console_.sleep_watch(r.u16()); break;
      case op::kWake: console_.wake_watch(r.u16()); break;
      case op::kBreak: {
        auto id = r.u16();
        console_.set_watch_break(id, r.u8() != 0);
        break;
      }
      default: ++decode_errors_;
    }
  } catch (const Error&) {
    ++decode_errors_;
  }
}

void ConsoleServer::handle_c(const Message& m) {
  try {
    ByteReader r(m.payload);
    switch (m.opcode) {
      case op::kHold:
      case op::kRelease: {
        auto b = console::button_from_index(r.u8());
        if (!b) throw Error(Errc::BadFrame, "button index");
        console_.enqueue(m.opcode == op::kHold ? console::ControlEvent::hold(*b) : console::ControlEvent::release(*b));
        break;
      }
      case op::kDelay: console_.enqueue(console::ControlEvent::delay(r.u32())); break;
      default: ++decode_errors_;
    }
  } catch (const Error&) {
    ++decode_errors_;
  }
}

bool ConsoleServer::handle_d(const Message& m) {
  if (m.payload.size() < 2) {
    ++decode_errors_;
    return true;
  }
  ByteReader r(m.payload);
  const auto req = r.u16();
  if (!opcode_valid_for(Channel::D, m.opcode)) {
    send(msg::event_done(req, static_cast<std::uint8_t>(Errc::UnknownOpcode)));
    return true;
  }
  try {
    switch (m.opcode) {
      case op::kLoadGame: console_.load_game(r.str()); break;
      case op::kLoadState: console_.load_snapshot(r.str()); break;
      case op::kSaveState: console_.save_snapshot(r.str()); break;
      case op::kFreeze: console_.set_frozen(true); break;
      case op::kUnfreeze: console_.set_frozen(false); break;
      case op::kSetSpeed: {
        console_.set_speed(r.u32());
        send(msg::reply(req, ByteWriter().u32(console_.speed()).data()));
        return true;
      }
      case op::kRead: {
        auto addr = r.u32();
        auto len = r.u16();
        send(msg::reply(req, console_.read_bytes(addr, len)));
        return true;
      }
      case op::kWrite: {
        auto addr = r.u32();
        console_.write_byte(addr, r.u8());
        ram_touched_ = true;
        break;
      }
      case op::kGetScreen: {
        const auto& fb = console_.screen();
        ByteWriter w;
        w.u16(console::FrameBuffer::width()).u16(console::FrameBuffer::height()).bytes(fb.bytes());
        send(msg::reply(req, w.data()));
        return true;
      }
      case op::kAudioStart: console_.start_audio_recording(); break;
      case op::kAudioStop: {
        auto samples = console_.stop_audio_recording();
        ByteWriter w;
        w.u32(console::kSampleRate).u32(static_cast<std::uint32_t>(samples.size()));
        for (auto s : samples) w.i16(s);
        send(msg::reply(req, w.data()));
        return true;
      }
      case op::kKill:
        send(msg::event_done(req, 0));
        flush_hits();
        console_.kill();
        return false;
    }
    send(msg::event_done(req, 0));
  } catch (const Error& e) {
    send(msg::event_done(req, static_cast<std::uint8_t>(e.code())));
  }
  return true;
}

}  // namespace vcle::ipc
