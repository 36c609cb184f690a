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

#ifndef TRIDENT_PROTOCOL_SESSION_HPP_
#define TRIDENT_PROTOCOL_SESSION_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "trident/model/model.hpp"
#include "trident/protocol/messages.hpp"
#include "trident/protocol/parties.hpp"
#include "trident/protocol/plan.hpp"

namespace trident::protocol {

struct SessionResult {
  std::vector<std::vector<std::int64_t>> logits;
  Transcript transcript;
  OpsReport ops;
  std::size_t client_galois_keys = 0;
  std::vector<std::string> warnings;
};

// Called on every message before it is framed; lets tests play the network.
using Interceptor = std::function<void(Message&)>;

class Session {
 public:
  Session(const model::ModelSpec& m, const ProtocolConfig& cfg, bool keep_payloads = false);

  const SessionPlan& plan() const { return *plan_; }
  const model::ModelSpec& model() const { return model_; }
  void set_interceptor(Interceptor f) { interceptor_ = std::move(f); }

  // Three roles stepped by a FIFO scheduler in this thread.
  SessionResult run(const std::vector<std::vector<std::int64_t>>& images);
  // Three roles on local TCP sockets, one thread each.
  SessionResult run_tcp(const std::vector<std::vector<std::int64_t>>& images, const std::string& host = "127.0.0.1");

#ifdef TRIDENT_KEY_ESCROW
  Probe& probe() { return probe_; }
  // Keys of the most recent run; valid once the client has started.
  const bfv::SecretKey& escrow_client_key() const { return client_->escrow_client_key(); }
  const bfv::SecretKey& escrow_proxy_key() const { return client_->escrow_proxy_key(); }
#endif

 private:
  struct Roles {
    std::shared_ptr<Client> client;
    std::shared_ptr<Cloud> cloud;
    std::shared_ptr<Proxy> proxy;
  };
  Roles make_roles(const std::vector<std::vector<std::int64_t>>& images);
  SessionResult collect(const Roles& r, Transcript transcript) const;

  model::ModelSpec model_;
  std::shared_ptr<const SessionPlan> plan_;
  bool keep_payloads_;
  Interceptor interceptor_;
  std::shared_ptr<Client> client_;
#ifdef TRIDENT_KEY_ESCROW
  Probe probe_;
#endif
};

}  // namespace trident::protocol

#endif  // TRIDENT_PROTOCOL_SESSION_HPP_
