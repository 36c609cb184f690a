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

#include "trident/protocol/parties.hpp"

#include <sstream>

#include "trident/common/error.hpp"
#include "trident/gc/activations.hpp"
#include "trident/gc/circuit.hpp"
#include "trident/protocol/mask.hpp"

namespace trident::protocol {

namespace {

using Key = std::pair<std::uint32_t, std::uint32_t>;

std::string label(std::string_view what, std::uint32_t inference, std::uint32_t stage) {
  return std::string(what) + "/" + std::to_string(inference) + "/" + std::to_string(stage);
}

Message make(Role from, Role to, MsgType type, std::uint32_t inference, std::uint32_t stage, Bytes body,
             std::uint8_t sub = 0) {
  Message m;
  m.from = from;
  m.to = to;
  m.type = type;
  m.sub = sub;
  m.inference = inference;
  m.stage = stage;
  m.body = std::move(body);
  return m;
}

Bytes write_cts(const std::vector<bfv::Ciphertext>& cts) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(cts.size()));
  for (const auto& ct : cts) ct.serialize(w);
  return w.take();
}

std::vector<bfv::Ciphertext> read_cts(const Message& m, const bfv::Context& ctx, std::size_t expected,
                                      bfv::KeyOwner owner) {
  ByteReader r(m.body);
  const std::uint32_t count = r.u32();
  if (count != expected) {
    throw ProtocolError(std::string(to_string(m.type)) + ": expected " + std::to_string(expected) +
                        " ciphertexts, got " + std::to_string(count));
  }
  std::vector<bfv::Ciphertext> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    out.push_back(bfv::Ciphertext::deserialize(r, ctx));
    if (out.back().owner() != owner) {
      throw ProtocolError(std::string(to_string(m.type)) + ": ciphertext under the " +
                          bfv::to_string(out.back().owner()) + " key, expected " + bfv::to_string(owner));
    }
  }
  r.expect_done(to_string(m.type));
  return out;
}

std::size_t input_ciphertexts(const SessionPlan& plan, std::size_t s) {
  const StagePlan& sp = plan.stages.at(s);
  return sp.conv ? static_cast<std::size_t>(sp.in_layout.num_cts()) : 1;
}

std::vector<bfv::Ciphertext> encrypt_all(const bfv::Context& ctx, const bfv::SecretKey& sk,
                                         const std::vector<SlotVector>& slots, Prng& prng) {
  std::vector<bfv::Ciphertext> out;
  for (const auto& s : slots) out.push_back(bfv::encrypt(ctx, sk, ctx.encode(s), prng));
  return out;
}

std::vector<SlotVector> decrypt_all(const bfv::Context& ctx, const bfv::SecretKey& sk,
                                    const std::vector<bfv::Ciphertext>& cts) {
  std::vector<SlotVector> out;
  for (const auto& ct : cts) out.push_back(ctx.decode(bfv::decrypt(ctx, sk, ct)));
  return out;
}

void expect_stage(const SessionPlan& plan, const Message& m) {
  if (m.stage >= plan.stages.size()) {
    throw ProtocolError(std::string(to_string(m.type)) + ": stage " + std::to_string(m.stage) + " out of range");
  }
}

}  // namespace

std::uint64_t batch_id(std::uint32_t inference, std::uint32_t stage) {
  return (std::uint64_t{inference} << 32) | stage;
}

std::string OpsReport::to_csv() const {
  std::ostringstream os;
  os << "inference,stage,pmult,autom,add,merge_add,keyswitches,reencryptions,gc_instances,and_gates\n";
  for (const auto& s : stages) {
    os << s.inference << ',' << s.stage << ',' << s.linear.pmult << ',' << s.linear.autom << ',' << s.linear.add
       << ',' << s.linear.merge_add << ',' << s.keyswitches << ',' << s.reencryptions << ',' << s.gc_instances
       << ',' << s.and_gates << '\n';
  }
  return os.str();
}

std::string error_context(Role role, const Message& m, const SessionPlan& plan) {
  std::string out = std::string(to_string(role)) + ", phase " + phase_of(m.type);
  if (m.type != MsgType::kKeyMaterial && m.type != MsgType::kDone) {
    out += ", inference " + std::to_string(m.inference) + ", stage " + std::to_string(m.stage);
    if (m.stage < plan.stages.size()) out += " (layer " + std::to_string(plan.stages[m.stage].stage.layer) + ")";
  }
  return out + ": ";
}

void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ParameterError& e) {
    throw ParameterError(context + e.what());
  } catch (const IntegrityError& e) {
    throw IntegrityError(context + e.what());
  } catch (const MissingKeyError& e) {
    throw MissingKeyError(e.galois_element(), context + e.what());
  } catch (const ProtocolError& e) {
    throw ProtocolError(context + e.what());
  } catch (const std::exception& e) {
    throw ProtocolError(context + e.what());
  }
}

// Client.

Client::Client(std::shared_ptr<const SessionPlan> plan, std::vector<std::vector<std::int64_t>> images)
    : plan_(std::move(plan)), images_(std::move(images)), prng_(plan_->cfg.seed, "client") {
  if (images_.empty()) throw ParameterError("no input images");
  const std::size_t want = plan_->stages.front().stage.in.size();
  const auto half = static_cast<std::int64_t>(plan_->cfg.params.t / 2);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i].empty()) throw ParameterError("image " + std::to_string(i) + " is empty");
    if (images_[i].size() != want) {
      throw ParameterError("image " + std::to_string(i) + " has " + std::to_string(images_[i].size()) +
                           " values, the model expects " + std::to_string(want));
    }
    for (auto v : images_[i]) {
      if (v > half || v < -half) throw ParameterError("image " + std::to_string(i) + ": value outside Z_t");
    }
  }
}

std::vector<Message> Client::start() {
  const auto& ctx = *plan_->ctx;
  Prng kp = prng_.derive("keys");
  s_c_ = bfv::keygen(ctx, bfv::KeyOwner::kClient, kp);
  s_p_ = bfv::keygen(ctx, bfv::KeyOwner::kProxy, kp);
  const auto gk = bfv::make_galois_keys(ctx, *s_c_, plan_->cfg.key_mode, plan_->bases.w_A, kp,
                                        plan_->client_steps());
  galois_keys_sent_ = gk.size();
  const auto rk = bfv::reenc_keygen(ctx, *s_c_, *s_p_, plan_->bases.w_SW, kp);

  ByteWriter cloud_keys;
  gk.serialize(cloud_keys);
  rk.serialize(cloud_keys);
  std::vector<Message> out;
  out.push_back(make(Role::kClient, Role::kCloud, MsgType::kKeyMaterial, 0, 0, cloud_keys.take(),
                     static_cast<std::uint8_t>(KeyKind::kClientEval)));
  out.push_back(make(Role::kClient, Role::kProxy, MsgType::kKeyMaterial, 0, 0, s_p_->to_bytes(),
                     static_cast<std::uint8_t>(KeyKind::kProxySecret)));
  out.push_back(input_message(0));
  return out;
}

Message Client::input_message(std::uint32_t inference) {
  const std::uint64_t t = plan_->cfg.params.t;
  std::vector<std::uint64_t> res;
  for (auto v : images_[inference]) res.push_back(to_residue(v, t));
  Prng ep = prng_.derive(label("encrypt", inference, 0));
  const auto cts = encrypt_all(*plan_->ctx, *s_c_, pack_stage_input(*plan_, 0, res), ep);
  encryptions_ += cts.size();
  return make(Role::kClient, Role::kCloud, MsgType::kInputCiphertexts, inference, 0, write_cts(cts));
}

std::vector<Message> Client::handle(const Message& m) {
  if (m.type != MsgType::kFinalResult) {
    throw ProtocolError(std::string("client: unexpected ") + to_string(m.type));
  }
  if (m.inference != logits_.size()) throw ProtocolError("client: result for an unexpected inference");
  const std::size_t last = plan_->stages.size() - 1;
  if (m.stage != last) throw ProtocolError("client: result from a non-final stage");
  const auto cts = read_cts(m, *plan_->ctx, output_ciphertexts(*plan_, last), bfv::KeyOwner::kProxy);
  const auto vals = extract_stage_output(*plan_, last, decrypt_all(*plan_->ctx, *s_p_, cts));
  std::vector<std::int64_t> logits;
  for (auto v : vals) logits.push_back(centered(v, plan_->cfg.params.t));
  logits_.push_back(std::move(logits));

  std::vector<Message> out;
  if (logits_.size() < images_.size()) {
    out.push_back(input_message(static_cast<std::uint32_t>(logits_.size())));
  } else {
    out.push_back(make(Role::kClient, Role::kCloud, MsgType::kDone, 0, 0, {}));
    out.push_back(make(Role::kClient, Role::kProxy, MsgType::kDone, 0, 0, {}));
    done_ = true;
  }
  return out;
}

// Cloud.

Cloud::Cloud(std::shared_ptr<const SessionPlan> plan, const model::ModelSpec& m)
    : plan_(std::move(plan)), eval_(plan_->ctx), prng_(plan_->cfg.seed, "cloud") {
  for (const auto& sp : plan_->stages) {
    const auto& layer = m.layers.at(sp.stage.layer);
    if (sp.conv) {
      prepared_.emplace_back(linear::prepare_conv(layer.weights, sp.stage.conv, *plan_->ctx));
    } else {
      prepared_.emplace_back(linear::prepare_fc(layer.weights, sp.stage.n_o, sp.stage.n_i, *plan_->ctx));
    }
  }
}

std::vector<Message> Cloud::handle(const Message& m) {
  const auto& ctx = *plan_->ctx;
  switch (m.type) {
    case MsgType::kKeyMaterial: {
      ByteReader r(m.body);
      if (m.sub == static_cast<std::uint8_t>(KeyKind::kClientEval) && m.from == Role::kClient) {
        client_keys_ = bfv::GaloisKeys::deserialize(r, ctx);
        reenc_ = bfv::ReEncryptionKey::deserialize(r, ctx);
        if (client_keys_->owner() != bfv::KeyOwner::kClient) throw ProtocolError("Galois keys not under the client key");
      } else if (m.sub == static_cast<std::uint8_t>(KeyKind::kProxyEval) && m.from == Role::kProxy) {
        proxy_keys_ = bfv::GaloisKeys::deserialize(r, ctx);
        if (proxy_keys_->owner() != bfv::KeyOwner::kProxy) throw ProtocolError("Galois keys not under the proxy key");
      } else {
        throw ProtocolError("cloud: unexpected key material");
      }
      r.expect_done("key material");
      return {};
    }
    case MsgType::kInputCiphertexts: {
      if (!client_keys_ || !reenc_) throw ProtocolError("input before key setup");
      if (m.stage != 0) throw ProtocolError("input addressed to a later stage");
      auto cts = read_cts(m, ctx, input_ciphertexts(*plan_, 0), bfv::KeyOwner::kClient);
      return run_stage(m.inference, 0, std::move(cts));
    }
    case MsgType::kEvalLabels:
      return answer_labels(m);
    case MsgType::kActivationCiphertexts: {
      expect_stage(*plan_, m);
      if (m.stage == 0) throw ProtocolError("activation output addressed to stage 0");
      auto it = pending_.find({m.inference, m.stage - 1});
      if (it == pending_.end() || !it->second.answered) throw ProtocolError("activation output without a round");
      auto cts = read_cts(m, ctx, input_ciphertexts(*plan_, m.stage), bfv::KeyOwner::kProxy);
      const auto masks = pack_stage_input(*plan_, m.stage, it->second.s_y);
      for (std::size_t j = 0; j < cts.size(); ++j) cts[j] = eval_.sub_plain(cts[j], ctx.encode(masks[j]));
      pending_.erase(it);
#ifdef TRIDENT_KEY_ESCROW
      if (probe_ && probe_->stage_input) probe_->stage_input(m.inference, m.stage, cts);
#endif
      return run_stage(m.inference, m.stage, std::move(cts));
    }
    case MsgType::kDone:
      done_ = true;
      return {};
    default:
      throw ProtocolError(std::string("cloud: unexpected ") + to_string(m.type));
  }
}

std::vector<Message> Cloud::run_stage(std::uint32_t inference, std::uint32_t s, std::vector<bfv::Ciphertext> in) {
  const auto& ctx = *plan_->ctx;
  const StagePlan& sp = plan_->stages[s];
  const std::uint64_t t = plan_->cfg.params.t;
  StageOps ops;
  ops.inference = inference;
  ops.stage = s;
  const std::uint64_t ks0 = eval_.counters().keyswitches;

  const bfv::GaloisKeys* keys = s == 0 ? &*client_keys_ : nullptr;
  if (s > 0) {
    if (!proxy_keys_) throw ProtocolError("proxy Galois keys missing");
    keys = &*proxy_keys_;
  }
  std::vector<bfv::Ciphertext> out;
  if (sp.conv) {
    auto res = linear::he_conv(eval_, in, std::get<linear::PreparedConv>(prepared_[s]), *keys);
    out = std::move(res.outputs);
    ops.linear = res.ops;
  } else {
    auto res = linear::he_fc(eval_, in.at(0), std::get<linear::PreparedFc>(prepared_[s]), *keys);
    out.push_back(std::move(res.output));
    ops.linear = res.ops;
  }
  ops.keyswitches = eval_.counters().keyswitches - ks0;

  const bool reencrypt = s == 0;
  if (reencrypt) {
    for (auto& ct : out) ct = eval_.reencrypt(ct, *reenc_);
    ops.reencryptions = out.size();
  }
#ifdef TRIDENT_KEY_ESCROW
  if (probe_ && probe_->linear_output) probe_->linear_output(inference, s, out);
#endif

  std::vector<Message> msgs;
  if (!sp.has_activation) {
    ops_.push_back(ops);
    msgs.push_back(make(Role::kCloud, Role::kClient, MsgType::kFinalResult, inference, s, write_cts(out)));
    msgs.back().reencrypted = reencrypt;
    return msgs;
  }

  // Additive mask over every slot, junk slots included.
  Prng mp = prng_.derive(label("mask", inference, s));
  std::vector<SlotVector> r_slots;
  for (auto& ct : out) {
    SlotVector r{std::vector<std::uint64_t>(ctx.n())};
    for (auto& v : r.values) v = plan_->cfg.zero_mask ? 0 : plan_->mask.sample(mp);
    ct = eval_.add_plain(ct, ctx.encode(r));
    r_slots.push_back(std::move(r));
  }
  const auto r = extract_stage_output(*plan_, s, r_slots);
#ifdef TRIDENT_KEY_ESCROW
  if (probe_ && probe_->mask) probe_->mask(inference, s, r);
  if (probe_ && probe_->masked) probe_->masked(inference, s, out);
#endif

  const gc::GcConfig& cfg = sp.gc;
  const bool truncated = cfg.mode == gc::GcMode::kTruncated;
  const auto [y_lo, y_hi] = sp.output_mask_range();
  const std::size_t inst = sp.instances();
  Pending pend;
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < inst; ++i) {
    std::vector<std::uint64_t> sx;
    for (int k = 0; k < sp.window; ++k) {
      const std::uint64_t rv = r[sp.gather[i * sp.window + k]];
      sx.push_back(truncated ? truncate_cloud_share(rv, cfg.f, cfg.b) : (t - rv) % t);
    }
    const std::uint64_t sy = plan_->cfg.zero_mask ? y_lo : mp.uniform_range(y_lo, y_hi);
    pend.s_y.push_back(sy);
    const auto a = gc::pack_bits(sx, cfg.in_width());
    const std::uint64_t sy_arr[1] = {sy};
    const auto b = gc::pack_bits(sy_arr, cfg.out_width());
    bits.insert(bits.end(), a.begin(), a.end());
    bits.insert(bits.end(), b.begin(), b.end());
  }
#ifdef TRIDENT_KEY_ESCROW
  if (probe_ && probe_->output_mask) probe_->output_mask(inference, s, pend.s_y);
#endif

  Prng gp = prng_.derive(label("garble", inference, s));
  auto garbling = gc::garble(sp.circuit, cfg, static_cast<std::uint32_t>(inst), gp.next_seed());
  garbling.garbled.batch_id = batch_id(inference, s);
  gc::attach_garbler_inputs(sp.circuit, garbling, bits);
  pend.secrets = std::move(garbling.secrets);

  ByteWriter bundle;
  bundle.u8(static_cast<std::uint8_t>(plan_->cfg.delivery));
  bundle.blob(garbling.garbled.serialize());
  if (plan_->cfg.delivery == gc::LabelDelivery::kBaseOt) {
    const gc::Seed seed = gp.next_seed();
    pend.ot = gc::OtSender::create(&seed);
    bundle.bytes(pend.ot->A);
  }
  ops.gc_instances = inst;
  ops.and_gates = inst * garbling.garbled.and_gates;
  ops_.push_back(ops);
  pending_[{inference, s}] = std::move(pend);

  msgs.push_back(make(Role::kCloud, Role::kProxy, MsgType::kMaskedResult, inference, s, write_cts(out)));
  msgs.back().reencrypted = reencrypt;
  msgs.push_back(make(Role::kCloud, Role::kProxy, MsgType::kGarbledBundle, inference, s, bundle.take()));
  return msgs;
}

std::vector<Message> Cloud::answer_labels(const Message& m) {
  expect_stage(*plan_, m);
  if (m.sub != static_cast<std::uint8_t>(LabelStep::kRequest)) throw ProtocolError("cloud: label response from proxy");
  auto it = pending_.find({m.inference, m.stage});
  if (it == pending_.end()) throw ProtocolError("label request for an unknown garbled batch");
  Pending& pend = it->second;
  // A garbled batch serves exactly one evaluation.
  if (pend.answered) throw ProtocolError("garbled batch " + std::to_string(batch_id(m.inference, m.stage)) + " reused");
  pend.answered = true;

  const StagePlan& sp = plan_->stages[m.stage];
  const auto pairs = gc::evaluator_label_pairs(sp.circuit, pend.secrets);
  ByteReader r(m.body);
  Bytes body;
  if (plan_->cfg.delivery == gc::LabelDelivery::kDealer) {
    const auto choices = r.bytes(r.remaining());
    if (choices.size() != pairs.size()) throw ProtocolError("label request has the wrong number of bits");
    const auto labels = gc::dealer_deliver(pairs, choices);
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(labels.size()));
    for (const auto& l : labels) l.write(w);
    body = w.take();
  } else {
    const auto req = gc::OtRequest::deserialize(r);
    r.expect_done("OT request");
    if (req.B.size() != pairs.size()) throw ProtocolError("OT request has the wrong number of points");
    body = gc::ot_respond(*pend.ot, req, pairs).serialize();
  }
  pend.secrets = {};
  return {make(Role::kCloud, Role::kProxy, MsgType::kEvalLabels, m.inference, m.stage, std::move(body),
               static_cast<std::uint8_t>(LabelStep::kResponse))};
}

// Proxy.

Proxy::Proxy(std::shared_ptr<const SessionPlan> plan) : plan_(std::move(plan)), prng_(plan_->cfg.seed, "proxy") {}

std::vector<Message> Proxy::handle(const Message& m) {
  const auto& ctx = *plan_->ctx;
  switch (m.type) {
    case MsgType::kKeyMaterial: {
      if (m.from != Role::kClient || m.sub != static_cast<std::uint8_t>(KeyKind::kProxySecret)) {
        throw ProtocolError("proxy: unexpected key material");
      }
      ByteReader r(m.body);
      s_p_ = bfv::SecretKey::deserialize(r, ctx);
      r.expect_done("proxy key");
      if (s_p_->owner() != bfv::KeyOwner::kProxy) throw ProtocolError("proxy: key is not a proxy key");
      Prng kp = prng_.derive("keys");
      const auto gk = bfv::make_galois_keys(ctx, *s_p_, plan_->cfg.key_mode, plan_->bases.w_A, kp,
                                            plan_->proxy_steps());
      return {make(Role::kProxy, Role::kCloud, MsgType::kKeyMaterial, 0, 0, gk.to_bytes(),
                   static_cast<std::uint8_t>(KeyKind::kProxyEval))};
    }
    case MsgType::kMaskedResult: {
      expect_stage(*plan_, m);
      if (!s_p_) throw ProtocolError("masked result before key setup");
      if (!plan_->stages[m.stage].has_activation) throw ProtocolError("masked result for a stage without activation");
      Round& rd = rounds_[{m.inference, m.stage}];
      if (rd.p) throw ProtocolError("duplicate masked result");
      const auto cts = read_cts(m, ctx, output_ciphertexts(*plan_, m.stage), bfv::KeyOwner::kProxy);
      decryptions_ += cts.size();
      rd.p = extract_stage_output(*plan_, m.stage, decrypt_all(ctx, *s_p_, cts));
      const MaskPlan& mp = plan_->mask;
      if (mp.mode == gc::GcMode::kTruncated && !plan_->cfg.zero_mask) {
        // x + r lies in (0, 2^(m+lambda) + 2^(m-1)); anything else is decryption noise.
        const std::uint64_t bound = (1ULL << (mp.value_bits + mp.lambda)) + (1ULL << (mp.value_bits - 1));
        for (std::size_t k = 0; k < rd.p->size(); ++k) {
          const std::uint64_t v = (*rd.p)[k];
          if (v == 0 || v >= bound) {
            throw IntegrityError("decrypted share " + std::to_string(k) + " lies outside the masked range");
          }
        }
      }
#ifdef TRIDENT_KEY_ESCROW
      if (probe_ && probe_->proxy_view) probe_->proxy_view(m.inference, m.stage, *rd.p);
#endif
      return maybe_request(m.inference, m.stage);
    }
    case MsgType::kGarbledBundle: {
      expect_stage(*plan_, m);
      const StagePlan& sp = plan_->stages[m.stage];
      if (!sp.has_activation) throw ProtocolError("garbled bundle for a stage without activation");
      ByteReader r(m.body);
      const auto delivery = static_cast<gc::LabelDelivery>(r.u8());
      if (delivery != plan_->cfg.delivery) throw ProtocolError("label delivery mode mismatch");
      const auto blob = r.blob();
      ByteReader gr(blob);
      auto g = gc::GarbledCircuit::deserialize(gr);
      gr.expect_done("garbled circuit");
      if (g.circuit_hash != sp.circuit.hash()) throw ProtocolError("garbled bundle for a different circuit");
      if (g.batch_id != batch_id(m.inference, m.stage)) throw ProtocolError("garbled batch id does not match its round");
      if (!batches_seen_.insert(g.batch_id).second) {
        throw ProtocolError("garbled batch " + std::to_string(g.batch_id) + " reused");
      }
      if (g.instances != sp.instances()) throw ProtocolError("garbled bundle has the wrong instance count");
      Round& rd = rounds_[{m.inference, m.stage}];
      if (delivery == gc::LabelDelivery::kBaseOt) {
        gc::Point a{};
        const auto pb = r.bytes(a.size());
        std::copy(pb.begin(), pb.end(), a.begin());
        rd.ot_point = a;
      }
      r.expect_done("garbled bundle");
      rd.garbled = std::move(g);
      return maybe_request(m.inference, m.stage);
    }
    case MsgType::kEvalLabels:
      return finish_round(m);
    case MsgType::kDone:
      done_ = true;
      return {};
    default:
      throw ProtocolError(std::string("proxy: unexpected ") + to_string(m.type));
  }
}

std::vector<Message> Proxy::maybe_request(std::uint32_t inference, std::uint32_t s) {
  Round& rd = rounds_[{inference, s}];
  if (!rd.p || !rd.garbled || rd.requested) return {};
  rd.requested = true;
  const StagePlan& sp = plan_->stages[s];
  const gc::GcConfig& cfg = sp.gc;
  std::vector<std::uint64_t> px;
  px.reserve(sp.gather.size());
  for (auto idx : sp.gather) {
    const std::uint64_t p = (*rd.p)[idx];
    px.push_back(cfg.mode == gc::GcMode::kTruncated ? truncate_proxy_share(p, cfg.f, cfg.b) : p);
  }
  const auto bits = gc::pack_bits(px, cfg.in_width());
  Bytes body;
  if (plan_->cfg.delivery == gc::LabelDelivery::kDealer) {
    body.assign(bits.begin(), bits.end());
  } else {
    const gc::Seed seed = prng_.derive(label("ot", inference, s)).next_seed();
    rd.receiver.emplace(*rd.ot_point, bits, &seed);
    body = rd.receiver->request().serialize();
  }
  return {make(Role::kProxy, Role::kCloud, MsgType::kEvalLabels, inference, s, std::move(body),
               static_cast<std::uint8_t>(LabelStep::kRequest))};
}

std::vector<Message> Proxy::finish_round(const Message& m) {
  expect_stage(*plan_, m);
  if (m.sub != static_cast<std::uint8_t>(LabelStep::kResponse)) throw ProtocolError("proxy: label request from cloud");
  auto it = rounds_.find({m.inference, m.stage});
  if (it == rounds_.end() || !it->second.requested) throw ProtocolError("label response without a request");
  Round& rd = it->second;
  const StagePlan& sp = plan_->stages[m.stage];
  ByteReader r(m.body);
  std::vector<gc::Block> labels;
  if (plan_->cfg.delivery == gc::LabelDelivery::kDealer) {
    const std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) labels.push_back(gc::Block::read(r));
  } else {
    const auto resp = gc::OtResponse::deserialize(r);
    labels = rd.receiver->finish(resp);
  }
  r.expect_done("label response");

  const auto bits = gc::evaluate_all(sp.circuit, *rd.garbled, labels);
  const int w = sp.gc.out_width();
  std::vector<std::uint64_t> z;
  for (std::size_t i = 0; i < sp.instances(); ++i) {
    z.push_back(gc::from_bits(std::span(bits).subspan(i * w, w)));
  }
  const std::uint32_t next = m.stage + 1;
  if (next >= plan_->stages.size()) throw ProtocolError("activation after the final stage");
  Prng ep = prng_.derive(label("encrypt", m.inference, next));
  const auto cts = encrypt_all(*plan_->ctx, *s_p_, pack_stage_input(*plan_, next, z), ep);
  encryptions_ += cts.size();
  rounds_.erase(it);
  return {make(Role::kProxy, Role::kCloud, MsgType::kActivationCiphertexts, m.inference, next, write_cts(cts))};
}

}  // namespace trident::protocol
