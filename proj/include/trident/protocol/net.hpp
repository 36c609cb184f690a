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

#ifndef TRIDENT_PROTOCOL_NET_HPP_
#define TRIDENT_PROTOCOL_NET_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "trident/protocol/messages.hpp"
#include "trident/protocol/parties.hpp"

namespace trident::protocol {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // "host:port" or ":port".
  static Endpoint parse(const std::string& s);
  std::string str() const { return host + ":" + std::to_string(port); }
};

// A bound, listening TCP socket. Port 0 picks a free port.
class Listener {
 public:
  explicit Listener(const Endpoint& ep);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  std::uint16_t port() const { return port_; }
  int fd() const { return fd_; }

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

struct NetOptions {
  std::chrono::milliseconds connect_timeout{15000};
  std::chrono::milliseconds idle_timeout{600000};
  // Records every message this role sends.
  Transcript* transcript = nullptr;
  std::mutex* transcript_mutex = nullptr;
  std::function<void(Message&)> interceptor;
  // Set by anyone to make the role give up promptly.
  std::atomic<bool>* abort = nullptr;
};

// Runs one role to completion: connects to both peers, accepts both peers on
// `listener`, and exchanges frames until the role is done.
void run_party(Party& party, Listener& listener, const std::map<Role, Endpoint>& peers,
               const NetOptions& opts = {});

}  // namespace trident::protocol

#endif  // TRIDENT_PROTOCOL_NET_HPP_
