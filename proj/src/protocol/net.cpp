/*
 * Copyright 2026 The Trident Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "trident/protocol/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "trident/common/error.hpp"

namespace trident::protocol {

namespace {

constexpr std::uint64_t kMaxPayload = std::uint64_t{1} << 32;
constexpr int kPollMs = 100;

ProtocolError sys_error(const std::string& what) {
  return ProtocolError(what + ": " + std::strerror(errno));
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    reset();
    fd_ = std::exchange(o.fd_, -1);
    return *this;
  }
  ~Fd() { reset(); }
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

sockaddr_in resolve(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string host = ep.host.empty() ? "0.0.0.0" : ep.host;
  if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res) {
    throw ProtocolError("cannot resolve host '" + host + "'");
  }
  sockaddr_in addr{};
  std::memcpy(&addr, res->ai_addr, sizeof(addr));
  ::freeaddrinfo(res);
  addr.sin_port = htons(ep.port);
  return addr;
}

void send_all(int fd, std::span<const std::uint8_t> data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw sys_error("send");
    }
    off += static_cast<std::size_t>(n);
  }
}

// False on a clean end of stream before the first byte.
bool recv_all(int fd, std::span<std::uint8_t> out, const std::atomic<bool>& stop) {
  std::size_t off = 0;
  while (off < out.size()) {
    pollfd p{fd, POLLIN, 0};
    const int pr = ::poll(&p, 1, kPollMs);
    if (stop) throw ProtocolError("receive cancelled");
    if (pr < 0) {
      if (errno == EINTR) continue;
      throw sys_error("poll");
    }
    if (pr == 0) continue;
    const ssize_t n = ::recv(fd, out.data() + off, out.size() - off, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw sys_error("recv");
    }
    if (n == 0) {
      if (off == 0) return false;
      throw ProtocolError("connection closed mid-frame");
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

std::optional<Message> read_frame(int fd, const std::atomic<bool>& stop) {
  std::uint8_t header[kFrameHeaderBytes];
  if (!recv_all(fd, header, stop)) return std::nullopt;
  const auto h = decode_frame_header(header);
  if (h.length > kMaxPayload) throw IntegrityError("frame: payload too large");
  Bytes payload(h.length);
  if (!recv_all(fd, payload, stop)) throw ProtocolError("connection closed mid-frame");
  return decode_frame_payload(h.type, payload);
}

Fd connect_to(const Endpoint& ep, std::chrono::milliseconds timeout, const std::atomic<bool>* abort) {
  const auto addr = resolve(ep);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
    if (fd.get() < 0) throw sys_error("socket");
    if (::connect(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0) {
      const int one = 1;
      ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return fd;
    }
    if (abort && *abort) throw ProtocolError("connect cancelled");
    if (std::chrono::steady_clock::now() > deadline) throw sys_error("connect to " + ep.str());
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

struct Inbox {
  struct Item {
    Message msg;
    bool eof = false;
    std::exception_ptr error;
  };
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Item> items;

  void push(Item it) {
    {
      std::lock_guard<std::mutex> lock(mu);
      items.push_back(std::move(it));
    }
    cv.notify_one();
  }
  std::optional<Item> pop(std::chrono::milliseconds wait) {
    std::unique_lock<std::mutex> lock(mu);
    if (!cv.wait_for(lock, wait, [&] { return !items.empty(); })) return std::nullopt;
    Item it = std::move(items.front());
    items.pop_front();
    return it;
  }
};

}  // namespace

Endpoint Endpoint::parse(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) throw ParameterError("endpoint '" + s + "' must be host:port");
  Endpoint ep;
  if (colon > 0) ep.host = s.substr(0, colon);
  const std::string port = s.substr(colon + 1);
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(port, &used);
    if (used != port.size() || v > 65535) throw std::out_of_range("port");
    ep.port = static_cast<std::uint16_t>(v);
  } catch (const std::logic_error&) {
    throw ParameterError("endpoint '" + s + "' has an invalid port");
  }
  return ep;
}

Listener::Listener(const Endpoint& ep) {
  const auto addr = resolve(ep);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw sys_error("socket");
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    const auto e = sys_error("bind " + ep.str());
    ::close(fd_);
    throw e;
  }
  if (::listen(fd_, 8) != 0) {
    const auto e = sys_error("listen");
    ::close(fd_);
    throw e;
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

void run_party(Party& party, Listener& listener, const std::map<Role, Endpoint>& peers, const NetOptions& opts) {
  const Role self = party.role();
  std::atomic<bool> stop{false};
  Inbox inbox;
  std::vector<std::thread> readers;
  std::mutex fds_mu;
  std::vector<Fd> incoming;

  const auto aborted = [&] { return opts.abort && opts.abort->load(); };
  const auto reader = [&](int fd) {
    try {
      const auto hello = read_frame(fd, stop);
      if (!hello || hello->type != MsgType::kHello || hello->to != self) {
        throw ProtocolError("peer did not identify itself");
      }
      const Role peer = hello->from;
      while (true) {
        auto m = read_frame(fd, stop);
        if (!m) {
          inbox.push({Message{}, true, nullptr});
          return;
        }
        if (m->from != peer) throw ProtocolError("frame claims a different sender");
        inbox.push({std::move(*m), false, nullptr});
      }
    } catch (...) {
      if (!stop) inbox.push({Message{}, false, std::current_exception()});
    }
  };
  const std::size_t expected_peers = peers.size() - (peers.count(self) ? 1 : 0);
  std::thread acceptor([&] {
    try {
      std::size_t accepted = 0;
      while (accepted < expected_peers && !stop) {
        pollfd p{listener.fd(), POLLIN, 0};
        if (::poll(&p, 1, kPollMs) <= 0) continue;
        const int fd = ::accept(listener.fd(), nullptr, nullptr);
        if (fd < 0) continue;
        std::lock_guard<std::mutex> lock(fds_mu);
        incoming.emplace_back(fd);
        readers.emplace_back(reader, fd);
        ++accepted;
      }
    } catch (...) {
      inbox.push({Message{}, false, std::current_exception()});
    }
  });

  std::map<Role, Fd> outgoing;
  const auto finish = [&] {
    stop = true;
    acceptor.join();
    std::lock_guard<std::mutex> lock(fds_mu);
    for (auto& t : readers) t.join();
    for (auto& [role, fd] : outgoing) ::shutdown(fd.get(), SHUT_WR);
  };

  try {
    for (const auto& [role, ep] : peers) {
      if (role == self) continue;
      outgoing[role] = connect_to(ep, opts.connect_timeout, opts.abort);
      Message hello;
      hello.from = self;
      hello.to = role;
      hello.type = MsgType::kHello;
      send_all(outgoing[role].get(), encode_frame(hello));
    }

    const auto send = [&](std::vector<Message> msgs) {
      for (auto& m : msgs) {
        if (opts.interceptor) opts.interceptor(m);
        auto it = outgoing.find(m.to);
        if (it == outgoing.end()) throw ProtocolError(std::string("no connection to ") + to_string(m.to));
        const Bytes frame = encode_frame(m);
        if (opts.transcript) {
          std::unique_lock<std::mutex> lock;
          if (opts.transcript_mutex) lock = std::unique_lock<std::mutex>(*opts.transcript_mutex);
          opts.transcript->record(m, frame.size());
        }
        send_all(it->second.get(), frame);
      }
    };

    try {
      send(party.start());
    } catch (...) {
      rethrow_with_context(std::string(to_string(self)) + ", phase setup: ");
    }
    std::size_t closed = 0;
    auto idle = std::chrono::milliseconds(0);
    while (!party.done()) {
      if (aborted()) throw ProtocolError(std::string(to_string(self)) + ": aborted after a peer failed");
      auto item = inbox.pop(std::chrono::milliseconds(kPollMs));
      if (!item) {
        idle += std::chrono::milliseconds(kPollMs);
        if (idle > opts.idle_timeout) throw ProtocolError(std::string(to_string(self)) + ": timed out waiting for peers");
        continue;
      }
      idle = std::chrono::milliseconds(0);
      if (item->error) std::rethrow_exception(item->error);
      if (item->eof) {
        if (++closed >= expected_peers) {
          throw ProtocolError(std::string(to_string(self)) + ": peers closed before the session finished");
        }
        continue;
      }
      const Message& m = item->msg;
      try {
        if (m.to != self) throw ProtocolError("frame addressed to another role");
        send(party.handle(m));
      } catch (...) {
        rethrow_with_context(error_context(self, m, party.plan()));
      }
    }
  } catch (...) {
    finish();
    throw;
  }
  finish();
}

}  // namespace trident::protocol
