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

#include "trident/protocol/session.hpp"

#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "trident/common/error.hpp"
#include "trident/protocol/net.hpp"

namespace trident::protocol {

Session::Session(const model::ModelSpec& m, const ProtocolConfig& cfg, bool keep_payloads)
    : model_(m), plan_(make_plan(m, cfg)), keep_payloads_(keep_payloads) {}

Session::Roles Session::make_roles(const std::vector<std::vector<std::int64_t>>& images) {
  Roles r;
  r.client = std::make_shared<Client>(plan_, images);
  r.cloud = std::make_shared<Cloud>(plan_, model_);
  r.proxy = std::make_shared<Proxy>(plan_);
  client_ = r.client;
#ifdef TRIDENT_KEY_ESCROW
  r.cloud->set_probe(&probe_);
  r.proxy->set_probe(&probe_);
#endif
  return r;
}

SessionResult Session::collect(const Roles& r, Transcript transcript) const {
  SessionResult res;
  res.logits = r.client->logits();
  res.transcript = std::move(transcript);
  res.ops.stages = r.cloud->ops();
  res.ops.client_encryptions = r.client->encryptions();
  res.ops.proxy_encryptions = r.proxy->encryptions();
  res.ops.proxy_decryptions = r.proxy->decryptions();
  res.client_galois_keys = r.client->galois_keys_sent();
  res.warnings = plan_->warnings;
  return res;
}

SessionResult Session::run(const std::vector<std::vector<std::int64_t>>& images) {
  const Roles r = make_roles(images);
  Party* parties[3] = {r.client.get(), r.cloud.get(), r.proxy.get()};
  Transcript transcript(keep_payloads_);
  std::deque<Message> queue;
  const auto post = [&](std::vector<Message> msgs) {
    for (auto& m : msgs) {
      if (interceptor_) interceptor_(m);
      const Bytes frame = encode_frame(m);
      transcript.record(m, frame.size());
      queue.push_back(decode_frame(frame));
    }
  };

  try {
    post(r.client->start());
  } catch (...) {
    rethrow_with_context("client, phase setup: ");
  }
  while (!queue.empty()) {
    Message m = std::move(queue.front());
    queue.pop_front();
    Party* p = parties[static_cast<int>(m.to)];
    try {
      if (p->done()) throw ProtocolError(std::string(to_string(m.type)) + " sent to a finished role");
      post(p->handle(m));
    } catch (...) {
      rethrow_with_context(error_context(p->role(), m, *plan_));
    }
  }
  for (Party* p : parties) {
    if (!p->done()) throw ProtocolError(std::string(to_string(p->role())) + ": session stalled");
  }
  return collect(r, std::move(transcript));
}

SessionResult Session::run_tcp(const std::vector<std::vector<std::int64_t>>& images, const std::string& host) {
  const Roles r = make_roles(images);
  Party* parties[3] = {r.client.get(), r.cloud.get(), r.proxy.get()};
  std::unique_ptr<Listener> listeners[3];
  std::map<Role, Endpoint> peers;
  for (int i = 0; i < 3; ++i) {
    listeners[i] = std::make_unique<Listener>(Endpoint{host, 0});
    peers[static_cast<Role>(i)] = Endpoint{host, listeners[i]->port()};
  }

  Transcript transcript(keep_payloads_);
  std::mutex mu;
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::vector<std::thread> threads;
  for (int i = 0; i < 3; ++i) {
    threads.emplace_back([&, i] {
      NetOptions opts;
      opts.transcript = &transcript;
      opts.transcript_mutex = &mu;
      opts.interceptor = interceptor_;
      opts.abort = &abort;
      try {
        run_party(*parties[i], *listeners[i], peers, opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        abort = true;
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return collect(r, std::move(transcript));
}

}  // namespace trident::protocol
