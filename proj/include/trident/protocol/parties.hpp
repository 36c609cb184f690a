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

#ifndef TRIDENT_PROTOCOL_PARTIES_HPP_
#define TRIDENT_PROTOCOL_PARTIES_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "trident/bfv/ciphertext.hpp"
#include "trident/bfv/evaluator.hpp"
#include "trident/bfv/keys.hpp"
#include "trident/gc/garble.hpp"
#include "trident/gc/ot.hpp"
#include "trident/linear/conv.hpp"
#include "trident/linear/fc.hpp"
#include "trident/model/model.hpp"
#include "trident/protocol/messages.hpp"
#include "trident/protocol/plan.hpp"

namespace trident::protocol {

// Homomorphic and garbled work done for one (inference, stage).
struct StageOps {
  std::uint32_t inference = 0;
  std::uint32_t stage = 0;
  linear::OpCount linear;
  std::uint64_t keyswitches = 0;
  std::uint64_t reencryptions = 0;
  std::uint64_t gc_instances = 0;
  std::uint64_t and_gates = 0;  // all instances
};

struct OpsReport {
  std::vector<StageOps> stages;
  std::uint64_t client_encryptions = 0;
  std::uint64_t proxy_encryptions = 0;
  std::uint64_t proxy_decryptions = 0;
  std::string to_csv() const;
};

#ifdef TRIDENT_KEY_ESCROW
// Test-only taps into role internals. Every callback is optional.
struct Probe {
  using Cts = std::vector<bfv::Ciphertext>;
  using Values = std::vector<std::uint64_t>;
  // Cloud: stage input after the output mask is removed.
  std::function<void(std::uint32_t inference, std::uint32_t stage, const Cts&)> stage_input;
  // Cloud: linear output before masking (proxy key from stage 0 on).
  std::function<void(std::uint32_t, std::uint32_t, const Cts&)> linear_output;
  // Cloud: mask r per linear output element and the masked ciphertexts.
  std::function<void(std::uint32_t, std::uint32_t, const Values& r)> mask;
  std::function<void(std::uint32_t, std::uint32_t, const Cts&)> masked;
  // Cloud: output mask s_y per activation output.
  std::function<void(std::uint32_t, std::uint32_t, const Values& s_y)> output_mask;
  // Proxy: decrypted x + r per linear output element.
  std::function<void(std::uint32_t, std::uint32_t, const Values& p)> proxy_view;
};
#endif

class Party {
 public:
  virtual ~Party() = default;
  virtual Role role() const = 0;
  virtual const SessionPlan& plan() const = 0;
  virtual std::vector<Message> start() { return {}; }
  virtual std::vector<Message> handle(const Message& m) = 0;
  virtual bool done() const = 0;
};

class Client : public Party {
 public:
  // images: centered integers, one vector per inference, in model input order.
  Client(std::shared_ptr<const SessionPlan> plan, std::vector<std::vector<std::int64_t>> images);

  Role role() const override { return Role::kClient; }
  const SessionPlan& plan() const override { return *plan_; }
  std::vector<Message> start() override;
  std::vector<Message> handle(const Message& m) override;
  bool done() const override { return done_; }

  const std::vector<std::vector<std::int64_t>>& logits() const { return logits_; }
  std::size_t galois_keys_sent() const { return galois_keys_sent_; }
  std::uint64_t encryptions() const { return encryptions_; }

#ifdef TRIDENT_KEY_ESCROW
  const bfv::SecretKey& escrow_client_key() const { return *s_c_; }
  const bfv::SecretKey& escrow_proxy_key() const { return *s_p_; }
#endif

 private:
  Message input_message(std::uint32_t inference);

  std::shared_ptr<const SessionPlan> plan_;
  std::vector<std::vector<std::int64_t>> images_;
  Prng prng_;
  std::optional<bfv::SecretKey> s_c_, s_p_;
  std::vector<std::vector<std::int64_t>> logits_;
  std::size_t galois_keys_sent_ = 0;
  std::uint64_t encryptions_ = 0;
  bool done_ = false;
};

class Cloud : public Party {
 public:
  // The only role that sees weights.
  Cloud(std::shared_ptr<const SessionPlan> plan, const model::ModelSpec& m);

  Role role() const override { return Role::kCloud; }
  const SessionPlan& plan() const override { return *plan_; }
  std::vector<Message> handle(const Message& m) override;
  bool done() const override { return done_; }

  const std::vector<StageOps>& ops() const { return ops_; }
  const bfv::EvalCounters& counters() const { return eval_.counters(); }
#ifdef TRIDENT_KEY_ESCROW
  void set_probe(const Probe* p) { probe_ = p; }
#endif

 private:
  struct Pending {
    gc::GarblerSecrets secrets;
    std::vector<std::uint64_t> s_y;
    std::optional<gc::OtSender> ot;
    bool answered = false;
  };
  using Prepared = std::variant<linear::PreparedConv, linear::PreparedFc>;

  std::vector<Message> run_stage(std::uint32_t inference, std::uint32_t stage, std::vector<bfv::Ciphertext> in);
  std::vector<Message> answer_labels(const Message& m);

  std::shared_ptr<const SessionPlan> plan_;
  std::vector<Prepared> prepared_;
  bfv::Evaluator eval_;
  Prng prng_;
  std::optional<bfv::GaloisKeys> client_keys_, proxy_keys_;
  std::optional<bfv::ReEncryptionKey> reenc_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Pending> pending_;
  std::vector<StageOps> ops_;
  bool done_ = false;
#ifdef TRIDENT_KEY_ESCROW
  const Probe* probe_ = nullptr;
#endif
};

class Proxy : public Party {
 public:
  explicit Proxy(std::shared_ptr<const SessionPlan> plan);

  Role role() const override { return Role::kProxy; }
  const SessionPlan& plan() const override { return *plan_; }
  std::vector<Message> handle(const Message& m) override;
  bool done() const override { return done_; }

  std::uint64_t encryptions() const { return encryptions_; }
  std::uint64_t decryptions() const { return decryptions_; }
#ifdef TRIDENT_KEY_ESCROW
  void set_probe(const Probe* p) { probe_ = p; }
#endif

 private:
  struct Round {
    std::optional<std::vector<std::uint64_t>> p;
    std::optional<gc::GarbledCircuit> garbled;
    std::optional<gc::Point> ot_point;
    std::optional<gc::OtReceiver> receiver;
    bool requested = false;
  };

  std::vector<Message> maybe_request(std::uint32_t inference, std::uint32_t stage);
  std::vector<Message> finish_round(const Message& m);

  std::shared_ptr<const SessionPlan> plan_;
  Prng prng_;
  std::optional<bfv::SecretKey> s_p_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Round> rounds_;
  std::set<std::uint64_t> batches_seen_;
  std::uint64_t encryptions_ = 0;
  std::uint64_t decryptions_ = 0;
  bool done_ = false;
#ifdef TRIDENT_KEY_ESCROW
  const Probe* probe_ = nullptr;
#endif
};

// Batch identifier of the garbled circuits for (inference, stage).
std::uint64_t batch_id(std::uint32_t inference, std::uint32_t stage);

// "cloud, phase activation, stage 1 (layer 2): " for error messages.
std::string error_context(Role role, const Message& m, const SessionPlan& plan);
// Rethrows the in-flight exception with `context` prepended, keeping its kind.
[[noreturn]] void rethrow_with_context(const std::string& context);

}  // namespace trident::protocol

#endif  // TRIDENT_PROTOCOL_PARTIES_HPP_
