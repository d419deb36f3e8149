#include <condition_variable>
#include <deque>
#include <mutex>

#include "vcle/common/error.hpp"
#include "vcle/ipc/link.hpp"

namespace vcle::ipc {

namespace {

struct Pipes {
  std::mutex mu;
  std::condition_variable server_cv;
  std::condition_variable client_cv;
  std::array<std::deque<std::uint8_t>, 4> queues;
  bool client_closed = false;
  bool server_closed = false;

  bool inbound_ready() const {
    return client_closed || !queues[1].empty() || !queues[2].empty() || !queues[3].empty();
  }
};

class MemoryServerLink final : public ServerLink {
 public:
  explicit MemoryServerLink(std::shared_ptr<Pipes> p) : p_(std::move(p)) {}
  ~MemoryServerLink() override { close(); }

  bool drain(Channel ch, Bytes& out) override {
    std::lock_guard lock(p_->mu);
    auto& q = p_->queues[static_cast<int>(ch)];
    const bool had = !q.empty();
    out.insert(out.end(), q.begin(), q.end());
    q.clear();
    return had || !p_->client_closed;
  }

  void wait(std::chrono::nanoseconds timeout) override {
    std::unique_lock lock(p_->mu);
    p_->server_cv.wait_for(lock, timeout, [&] { return p_->inbound_ready(); });
  }

  void send(std::span<const std::uint8_t> bytes) override {
    {
      std::lock_guard lock(p_->mu);
      if (p_->client_closed) return;
      p_->queues[0].insert(p_->queues[0].end(), bytes.begin(), bytes.end());
    }
    p_->client_cv.notify_all();
  }

  void close() override {
    {
      std::lock_guard lock(p_->mu);
      p_->server_closed = true;
    }
    p_->client_cv.notify_all();
  }

 private:
  std::shared_ptr<Pipes> p_;
};

class MemoryClientLink final : public ClientLink {
 public:
  explicit MemoryClientLink(std::shared_ptr<Pipes> p) : p_(std::move(p)) {}
  ~MemoryClientLink() override { close(); }

  void send(Channel ch, std::span<const std::uint8_t> bytes) override {
    {
      std::lock_guard lock(p_->mu);
      if (p_->server_closed || p_->client_closed) throw Error(Errc::NotRunning, "session channels closed");
      auto& q = p_->queues[static_cast<int>(ch)];
      q.insert(q.end(), bytes.begin(), bytes.end());
    }
    p_->server_cv.notify_all();
  }

  std::size_t receive(std::span<std::uint8_t> buf) override {
    std::unique_lock lock(p_->mu);
    auto& q = p_->queues[0];
    p_->client_cv.wait(lock, [&] { return !q.empty() || p_->server_closed || p_->client_closed; });
    if (p_->client_closed) return 0;
    const auto n = std::min(buf.size(), q.size());
    std::copy_n(q.begin(), n, buf.begin());
    q.erase(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n));
    return n;
  }

  void close() override {
    {
      std::lock_guard lock(p_->mu);
      p_->client_closed = true;
    }
    p_->client_cv.notify_all();
    p_->server_cv.notify_all();
  }

 private:
  std::shared_ptr<Pipes> p_;
};

class RecordingLink final : public ClientLink {
 public:
  RecordingLink(std::unique_ptr<ClientLink> inner, std::shared_ptr<ChannelDumps> dumps)
      : inner_(std::move(inner)), dumps_(std::move(dumps)) {}

  void send(Channel ch, std::span<const std::uint8_t> bytes) override {
    {
      std::lock_guard lock(dumps_->mu);
      auto& d = dumps_->bytes[static_cast<int>(ch)];
      d.insert(d.end(), bytes.begin(), bytes.end());
    }
    inner_->send(ch, bytes);
  }

  std::size_t receive(std::span<std::uint8_t> buf) override {
    auto n = inner_->receive(buf);
    std::lock_guard lock(dumps_->mu);
    dumps_->bytes[0].insert(dumps_->bytes[0].end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n));
    return n;
  }

  void close() override { inner_->close(); }

 private:
  std::unique_ptr<ClientLink> inner_;
  std::shared_ptr<ChannelDumps> dumps_;
};

}  // namespace

std::pair<std::unique_ptr<ServerLink>, std::unique_ptr<ClientLink>> make_memory_link() {
  auto p = std::make_shared<Pipes>();
  return {std::make_unique<MemoryServerLink>(p), std::make_unique<MemoryClientLink>(p)};
}

std::unique_ptr<ClientLink> make_recording_link(std::unique_ptr<ClientLink> inner,
                                                std::shared_ptr<ChannelDumps> dumps) {
  return std::make_unique<RecordingLink>(std::move(inner), std::move(dumps));
}

}  // namespace vcle::ipc
