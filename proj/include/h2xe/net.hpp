#pragma once

// Newline-delimited request/reply over TCP (POSIX sockets) or any stream pair.
// Each connection gets its own handler, built by the factory on accept.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <functional>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace h2xe::net {

using LineHandler = std::function<std::string(std::string_view)>;
using HandlerFactory = std::function<LineHandler()>;

/// Reply to every line of `in` on `out` until end of input. Blank lines are skipped.
inline void serve_stream(std::istream& in, std::ostream& out, const LineHandler& handle) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out << handle(line) << '\n';
    out.flush();
  }
}

inline bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

/// Buffered line reader over a socket.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  bool next(std::string& line) {
    for (;;) {
      if (const auto nl = buf_.find('\n'); nl != std::string::npos) {
        line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
      char chunk[65536];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  std::string buf_;
};

class TcpLineServer {
 public:
  /// Binds immediately; port 0 picks a free one.
  TcpLineServer(int port, HandlerFactory factory, bool loopback_only = true) : factory_(std::move(factory)) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    addr.sin_addr.s_addr = htonl(loopback_only ? INADDR_LOOPBACK : INADDR_ANY);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 16) < 0) {
      const std::string err = std::strerror(errno);
      ::close(listen_fd_);
      throw std::runtime_error("cannot listen on port " + std::to_string(port) + ": " + err);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
  }

  TcpLineServer(const TcpLineServer&) = delete;
  TcpLineServer& operator=(const TcpLineServer&) = delete;

  ~TcpLineServer() {
    stop();
    ::close(listen_fd_);
  }

  int port() const { return port_; }

  /// Accept loop; returns after stop().
  void run() {
    while (!stopping_) {
      const int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) {
        if (errno == EINTR) continue;
        break;
      }
      std::lock_guard lock(mu_);
      if (stopping_) {
        ::close(fd);
        break;
      }
      clients_.insert(fd);
      workers_.emplace_back([this, fd] { serve_client(fd); });
    }
  }

  void stop() {
    {
      std::lock_guard lock(mu_);
      if (stopping_.exchange(true)) return;
      ::shutdown(listen_fd_, SHUT_RDWR);
      for (int fd : clients_) ::shutdown(fd, SHUT_RDWR);
    }
    std::vector<std::thread> workers;
    {
      std::lock_guard lock(mu_);
      workers.swap(workers_);
    }
    for (auto& t : workers)
      if (t.joinable()) t.join();
  }

 private:
  void serve_client(int fd) {
    try {
      const LineHandler handle = factory_();
      LineReader reader(fd);
      std::string line;
      while (reader.next(line)) {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!send_all(fd, handle(line) + "\n")) break;
      }
    } catch (const std::exception&) {
    }
    std::lock_guard lock(mu_);
    clients_.erase(fd);
    ::close(fd);
  }

  HandlerFactory factory_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::set<int> clients_;
  std::vector<std::thread> workers_;
};

/// Blocking loopback client connection, for tests and tools.
inline int connect_loopback(int port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    ::close(fd);
    throw std::runtime_error("connect failed");
  }
  return fd;
}

}  // namespace h2xe::net
