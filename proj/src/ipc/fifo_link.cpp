#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>

#include "vcle/common/error.hpp"
#include "vcle/ipc/link.hpp"

namespace vcle::ipc {

namespace {

constexpr std::array<const char*, 4> kNames = {"a", "b", "c", "d"};

int open_or_throw(const std::filesystem::path& p, int flags) {
  int fd;
  do {
    fd = ::open(p.c_str(), flags);
  } while (fd < 0 && errno == EINTR);
  if (fd < 0) throw Error(Errc::IoError, "open " + p.string() + ": " + std::strerror(errno));
  return fd;
}

void write_all(int fd, std::span<const std::uint8_t> bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    auto n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::IoError, std::string("write: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

class FifoServerLink final : public ServerLink {
 public:
  explicit FifoServerLink(const std::filesystem::path& dir) {
    ::signal(SIGPIPE, SIG_IGN);
    // Rendezvous order matches open_fifo_client: a, then b, c, d.
    fds_[0] = open_or_throw(dir / kNames[0], O_WRONLY);
    for (int i = 1; i < 4; ++i) {
      fds_[i] = open_or_throw(dir / kNames[i], O_RDONLY);
      ::fcntl(fds_[i], F_SETFL, ::fcntl(fds_[i], F_GETFL) | O_NONBLOCK);
    }
  }
  ~FifoServerLink() override { close(); }

  bool drain(Channel ch, Bytes& out) override {
    int fd = fds_[static_cast<int>(ch)];
    if (fd < 0) return false;
    std::uint8_t buf[4096];
    for (;;) {
      auto n = ::read(fd, buf, sizeof buf);
      if (n > 0) {
        out.insert(out.end(), buf, buf + n);
        continue;
      }
      if (n == 0) return false;
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) return true;
      return false;
    }
  }

  void wait(std::chrono::nanoseconds timeout) override {
    pollfd pfds[3];
    int n = 0;
    for (int i = 1; i < 4; ++i)
      if (fds_[i] >= 0) pfds[n++] = pollfd{fds_[i], POLLIN, 0};
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(timeout).count();
    ::poll(pfds, static_cast<nfds_t>(n), static_cast<int>(std::max<std::int64_t>(ms, timeout.count() > 0 ? 1 : 0)));
  }

  void send(std::span<const std::uint8_t> bytes) override {
    if (fds_[0] < 0) return;
    write_all(fds_[0], bytes);
  }

  void close() override {
    for (auto& fd : fds_) {
      if (fd >= 0) ::close(fd);
      fd = -1;
    }
  }

 private:
  std::array<int, 4> fds_{-1, -1, -1, -1};
};

class FifoClientLink final : public ClientLink {
 public:
  explicit FifoClientLink(const std::filesystem::path& dir) {
    ::signal(SIGPIPE, SIG_IGN);
    fds_[0] = open_or_throw(dir / kNames[0], O_RDONLY);
    for (int i = 1; i < 4; ++i) fds_[i] = open_or_throw(dir / kNames[i], O_WRONLY);
  }
  ~FifoClientLink() override {
    close();
    for (auto& fd : fds_)
      if (fd >= 0) ::close(fd);
  }

  void send(Channel ch, std::span<const std::uint8_t> bytes) override {
    std::lock_guard lock(write_mu_);
    if (closed_) throw Error(Errc::NotRunning, "session channels closed");
    try {
      write_all(fds_[static_cast<int>(ch)], bytes);
    } catch (const Error&) {
      throw Error(Errc::NotRunning, "console hung up");
    }
  }

  std::size_t receive(std::span<std::uint8_t> buf) override {
    while (!closed_) {
      pollfd p{fds_[0], POLLIN, 0};
      int r = ::poll(&p, 1, 50);
      if (r <= 0) continue;
      auto n = ::read(fds_[0], buf.data(), buf.size());
      if (n > 0) return static_cast<std::size_t>(n);
      if (n == 0) return 0;
      if (errno != EINTR && errno != EAGAIN) return 0;
    }
    return 0;
  }

  void close() override {
    std::lock_guard lock(write_mu_);
    if (closed_) return;
    closed_ = true;
    // Dropping the writers signals EOF to the console.
    for (int i = 1; i < 4; ++i) {
      if (fds_[i] >= 0) ::close(fds_[i]);
      fds_[i] = -1;
    }
  }

 private:
  std::array<int, 4> fds_{-1, -1, -1, -1};
  std::mutex write_mu_;
  std::atomic<bool> closed_{false};
};

}  // namespace

void create_fifo_session(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (auto* name : kNames) {
    auto p = dir / name;
    if (std::filesystem::exists(p)) {
      if (!std::filesystem::is_fifo(p)) throw Error(Errc::IoError, p.string() + " exists and is not a FIFO");
      continue;
    }
    if (::mkfifo(p.c_str(), 0600) != 0) throw Error(Errc::IoError, "mkfifo " + p.string() + ": " + std::strerror(errno));
  }
}

void remove_fifo_session(const std::filesystem::path& dir) {
  std::error_code ec;
  for (auto* name : kNames) std::filesystem::remove(dir / name, ec);
}

std::unique_ptr<ServerLink> open_fifo_server(const std::filesystem::path& dir) {
  return std::make_unique<FifoServerLink>(dir);
}

std::unique_ptr<ClientLink> open_fifo_client(const std::filesystem::path& dir) {
  return std::make_unique<FifoClientLink>(dir);
}

}  // namespace vcle::ipc
