#include "vcle/client/console_client.hpp"

#include <algorithm>
#include <array>

#include "vcle/common/error.hpp"
#include "vcle/console/console.hpp"
#include "vcle/console/memory.hpp"
#include "vcle/ipc/server.hpp"

namespace vcle::client {

using ipc::Channel;
using ipc::Message;
namespace msg = ipc::msg;
namespace op = ipc::op;

ConsoleClient::ConsoleClient(ConsoleOptions options) : options_(std::move(options)) {}

ConsoleClient::~ConsoleClient() {
  if (running()) {
    try {
      kill();
    } catch (...) {
      shutdown();
    }
  }
}

bool ConsoleClient::running() const {
  std::lock_guard lock(mu_);
  return running_ && !closed_;
}

void ConsoleClient::require_running() const {
  if (!running()) throw Error(Errc::NotRunning, "console is not running");
}

void ConsoleClient::run() {
  bool stale = false;
  {
    std::lock_guard lock(mu_);
    if (running_ && !closed_) throw Error(Errc::AlreadyRunning, "console already running");
    stale = running_;
  }
  if (stale) shutdown();
  std::unique_ptr<ipc::ClientLink> link;
  if (options_.fifo_session) {
    link = ipc::open_fifo_client(*options_.fifo_session);
  } else {
    if (!options_.loader) throw Error(Errc::UnknownGame, "no cartridge loader");
    console_ = std::make_unique<console::Console>(options_.loader);
    console_->set_snapshot_dir(options_.snapshot_dir);
    console_->run();
    auto [server_end, client_end] = ipc::make_memory_link();
    server_link_ = std::move(server_end);
    link = std::move(client_end);
    server_ = std::make_unique<ipc::ConsoleServer>(
        *console_, *server_link_, ipc::ServerOptions{options_.fast, options_.start_frozen});
    server_thread_ = std::thread([this] { server_->serve(); });
  }
  if (options_.dumps) link = ipc::make_recording_link(std::move(link), options_.dumps);
  link_ = std::move(link);
  {
    std::lock_guard lock(mu_);
    running_ = true;
    closed_ = false;
    stopping_ = false;
    next_req_ = 1;
    next_watch_ = 1;
    speed_ = 100;
    pending_.clear();
    listeners_.clear();
    notify_queue_.clear();
    received_seq_ = 0;
    delivered_seq_ = 0;
  }
  reader_thread_ = std::thread([this] { reader_loop(); });
  notifier_thread_ = std::thread([this] { notifier_loop(); });
}

void ConsoleClient::kill() {
  require_running();
  try {
    request([](std::uint16_t req) { return msg::kill(req); });
  } catch (const Error&) {
  }
  shutdown();
}

void ConsoleClient::shutdown() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
    notify_queue_.clear();
  }
  notify_cv_.notify_all();
  delivered_cv_.notify_all();
  if (link_) link_->close();
  if (reader_thread_.joinable()) reader_thread_.join();
  if (notifier_thread_.joinable()) notifier_thread_.join();
  if (server_thread_.joinable()) {
    server_->stop();
    server_thread_.join();
  }
  link_.reset();
  server_.reset();
  server_link_.reset();
  console_.reset();
  std::lock_guard lock(mu_);
  running_ = false;
  listeners_.clear();
  pending_.clear();
}

void ConsoleClient::send(Channel ch, const Message& m) { send_many(ch, {m}); }

void ConsoleClient::send_many(Channel ch, std::initializer_list<Message> ms) {
  Bytes out;
  for (const auto& m : ms) ipc::encode_into(m, out);
  std::lock_guard lock(send_mu_);
  link_->send(ch, out);
}

ConsoleClient::Response ConsoleClient::request(const std::function<Message(std::uint16_t)>& make) {
  std::uint16_t req;
  {
    std::unique_lock lock(mu_);
    if (!running_ || closed_) throw Error(Errc::NotRunning, "console is not running");
    do {
      req = next_req_++;
      if (next_req_ == 0) next_req_ = 1;
    } while (pending_.count(req));
    pending_[req] = std::nullopt;
  }
  try {
    send(Channel::D, make(req));
  } catch (...) {
    std::lock_guard lock(mu_);
    pending_.erase(req);
    throw;
  }
  std::unique_lock lock(mu_);
  reply_cv_.wait(lock, [&] { return pending_[req].has_value() || closed_; });
  auto slot = std::move(pending_[req]);
  pending_.erase(req);
  if (!slot) throw Error(Errc::NotRunning, "console closed the session");
  if (slot->status != 0) {
    auto code = static_cast<Errc>(slot->status);
    throw Error(code, std::string(to_string(code)));
  }
  return std::move(*slot);
}

void ConsoleClient::reader_loop() {
  ipc::FrameDecoder dec(Channel::A);
  std::array<std::uint8_t, 65536> buf{};
  try {
    for (;;) {
      auto n = link_->receive(buf);
      if (n == 0) break;
      dec.feed(std::span<const std::uint8_t>(buf.data(), n));
      while (auto m = dec.next()) {
        ByteReader r(m->payload);
        if (m->opcode == op::kMemChanged) {
          MemoryChange change;
          change.id = r.u16();
          change.addr = r.u32();
          auto len = r.u16();
          auto data = r.bytes(len);
          change.bytes.assign(data.begin(), data.end());
          std::lock_guard lock(mu_);
          if (stopping_) continue;
          notify_queue_.push_back(std::move(change));
          ++received_seq_;
          notify_cv_.notify_one();
        } else {
          auto req = r.u16();
          Response resp;
          if (m->opcode == op::kEventDone) {
            resp.status = r.u8();
          } else {
            auto rest = r.rest();
            resp.payload.assign(rest.begin(), rest.end());
          }
          std::lock_guard lock(mu_);
          resp.notify_seq = received_seq_;
          auto it = pending_.find(req);
          if (it != pending_.end()) it->second = std::move(resp);
          reply_cv_.notify_all();
        }
      }
    }
  } catch (const Error&) {
  }
  std::lock_guard lock(mu_);
  closed_ = true;
  reply_cv_.notify_all();
  notify_cv_.notify_all();
  delivered_cv_.notify_all();
}

void ConsoleClient::notifier_loop() {
  std::unique_lock lock(mu_);
  for (;;) {
    notify_cv_.wait(lock, [&] { return stopping_ || !notify_queue_.empty() || closed_; });
    if (stopping_) return;
    if (notify_queue_.empty()) {
      if (closed_) return;
      continue;
    }
    auto change = std::move(notify_queue_.front());
    notify_queue_.pop_front();
    Subscriber sub;
    auto it = listeners_.find(change.id);
    if (it != listeners_.end() && it->second.awake) sub = it->second.subscriber;
    lock.unlock();
    if (sub) sub(change);
    lock.lock();
    ++delivered_seq_;
    delivered_cv_.notify_all();
  }
}

void ConsoleClient::flush_notifications() {
  auto resp = request([](std::uint16_t req) { return msg::read(req, 0, 0); });
  std::unique_lock lock(mu_);
  delivered_cv_.wait(lock, [&] { return delivered_seq_ >= resp.notify_seq || stopping_ || closed_; });
}

void ConsoleClient::hold_button(Button b) {
  require_running();
  send(Channel::C, msg::hold(static_cast<std::uint8_t>(b)));
}

void ConsoleClient::release_button(Button b) {
  require_running();
  send(Channel::C, msg::release(static_cast<std::uint8_t>(b)));
}

void ConsoleClient::touch_button(Button b, std::uint32_t hold_ms) {
  require_running();
  auto idx = static_cast<std::uint8_t>(b);
  send_many(Channel::C, {msg::hold(idx), msg::delay(hold_ms), msg::release(idx)});
}

void ConsoleClient::delay_button(std::uint32_t ms) {
  require_running();
  send(Channel::C, msg::delay(ms));
}

Bytes ConsoleClient::read_bytes(std::uint32_t addr, std::uint32_t len) {
  require_running();
  if (!console::Ram::in_range(addr, len)) throw Error(Errc::OutOfBounds, "read outside RAM");
  Bytes out;
  out.reserve(len);
  std::uint32_t done = 0;
  do {
    auto chunk = static_cast<std::uint16_t>(std::min<std::uint32_t>(len - done, 0xFFFF));
    auto at = addr + done;
    auto resp = request([&](std::uint16_t req) { return msg::read(req, at, chunk); });
    out.insert(out.end(), resp.payload.begin(), resp.payload.end());
    done += chunk;
  } while (done < len);
  return out;
}

void ConsoleClient::write_byte(std::uint32_t addr, std::uint8_t value) {
  require_running();
  if (!console::Ram::in_range(addr, 1)) throw Error(Errc::OutOfBounds, "write outside RAM");
  request([&](std::uint16_t req) { return msg::write(req, addr, value); });
}

std::uint16_t ConsoleClient::add_memory_listener(std::uint32_t addr, std::uint16_t len, Subscriber subscriber) {
  require_running();
  if (len == 0 || !console::Ram::in_range(addr, len)) throw Error(Errc::OutOfBounds, "listener outside RAM");
  std::uint16_t id;
  {
    std::lock_guard lock(mu_);
    id = next_watch_++;
    listeners_[id] = Listener{std::move(subscriber), true};
  }
  send(Channel::B, msg::watch(id, addr, len));
  return id;
}

void ConsoleClient::clear_memory_listeners() {
  require_running();
  {
    std::lock_guard lock(mu_);
    listeners_.clear();
  }
  send(Channel::B, msg::clear_all());
}

void ConsoleClient::sleep_memory_listener(std::uint16_t id) {
  require_running();
  {
    std::lock_guard lock(mu_);
    auto it = listeners_.find(id);
    if (it == listeners_.end()) throw Error(Errc::UnknownWatch, "unknown listener");
    if (!it->second.awake) return;
    it->second.awake = false;
  }
  send(Channel::B, msg::sleep(id));
}

void ConsoleClient::wake_memory_listener(std::uint16_t id) {
  require_running();
  {
    std::lock_guard lock(mu_);
    auto it = listeners_.find(id);
    if (it == listeners_.end()) throw Error(Errc::UnknownWatch, "unknown listener");
    if (it->second.awake) return;
    it->second.awake = true;
  }
  send(Channel::B, msg::wake(id));
}

void ConsoleClient::set_listener_break(std::uint16_t id, bool enabled) {
  require_running();
  {
    std::lock_guard lock(mu_);
    if (!listeners_.count(id)) throw Error(Errc::UnknownWatch, "unknown listener");
  }
  send(Channel::B, msg::set_break(id, enabled));
}

Screen ConsoleClient::get_screen() {
  auto resp = request([](std::uint16_t req) { return msg::get_screen(req); });
  ByteReader r(resp.payload);
  Screen s;
  s.width = r.u16();
  s.height = r.u16();
  auto rgb = r.bytes(static_cast<std::size_t>(s.width) * s.height * 3);
  s.rgb.assign(rgb.begin(), rgb.end());
  return s;
}

void ConsoleClient::start_recording_audio() {
  request([](std::uint16_t req) { return msg::audio_start(req); });
}

AudioClip ConsoleClient::stop_recording_audio() {
  auto resp = request([](std::uint16_t req) { return msg::audio_stop(req); });
  ByteReader r(resp.payload);
  AudioClip clip;
  clip.sample_rate = r.u32();
  auto n = r.u32();
  clip.samples.resize(n);
  for (auto& s : clip.samples) s = r.i16();
  return clip;
}

void ConsoleClient::freeze() {
  request([](std::uint16_t req) { return msg::freeze(req); });
}

void ConsoleClient::unfreeze() {
  request([](std::uint16_t req) { return msg::unfreeze(req); });
}

std::uint32_t ConsoleClient::speed() const {
  require_running();
  std::lock_guard lock(mu_);
  return speed_;
}

void ConsoleClient::set_speed(std::uint32_t percent) {
  if (percent == 0) {
    require_running();
    throw Error(Errc::InvalidSpeed, "speed must be positive");
  }
  auto resp = request([&](std::uint16_t req) { return msg::set_speed(req, percent); });
  ByteReader r(resp.payload);
  auto s = r.u32();
  std::lock_guard lock(mu_);
  speed_ = s;
}

void ConsoleClient::load_game(const std::string& name) {
  request([&](std::uint16_t req) { return msg::load_game(req, name); });
}

void ConsoleClient::save_state(const std::string& name) {
  request([&](std::uint16_t req) { return msg::save_state(req, name); });
}

void ConsoleClient::load_state(const std::string& name) {
  request([&](std::uint16_t req) { return msg::load_state(req, name); });
}

}  // namespace vcle::client
