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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "trident/bfv/ciphertext.hpp"
#include "trident/common/error.hpp"
#include "trident/gc/stats.hpp"
#include "trident/model/model.hpp"
#include "trident/protocol/mask.hpp"
#include "trident/protocol/session.hpp"

namespace trident::protocol {
namespace {

using testing::tiny_setup;

const std::uint64_t kT = RingParams::toy().t;

std::int64_t floor_div(std::int64_t x, int f) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(x) / std::ldexp(1.0, f)));
}

std::vector<std::uint64_t> decrypt_elements(const Session& s, std::size_t stage_for_layout, bool input_layout,
                                            const bfv::SecretKey& sk, const std::vector<bfv::Ciphertext>& cts) {
  const auto& ctx = *s.plan().ctx;
  std::vector<SlotVector> slots;
  for (const auto& ct : cts) slots.push_back(ctx.decode(bfv::decrypt(ctx, sk, ct)));
  const auto& sp = s.plan().stages[stage_for_layout];
  if (!input_layout) return extract_stage_output(s.plan(), stage_for_layout, slots);
  if (sp.conv) return linear::unpack(slots, sp.in_layout);
  return {slots[0].values.begin(), slots[0].values.begin() + sp.stage.n_i};
}

TEST(MaskTest, TruncatedPlanKeepsNoWrapMargin) {
  const auto p = MaskPlan::make(gc::GcMode::kTruncated, kT, 11);
  EXPECT_EQ(p.lambda, 7);
  EXPECT_FALSE(p.warning.empty());
  EXPECT_LT((1ULL << (11 + p.lambda)) + (1ULL << 10), kT);
  EXPECT_GE((1ULL << (12 + p.lambda)) + (1ULL << 10), kT);
  const auto wide = MaskPlan::make(gc::GcMode::kTruncated, std::uint64_t{1} << 61, 11);
  EXPECT_EQ(wide.lambda, kDefaultLambda);
  EXPECT_TRUE(wide.warning.empty());
  EXPECT_THROW(MaskPlan::make(gc::GcMode::kTruncated, kT, 19), ParameterError);
}

TEST(MaskTest, ReconstructionModT) {
  const auto plan = MaskPlan::make(gc::GcMode::kModT, kT, 0);
  Prng prng(5, "mask-test");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t x = rng() % kT;
    const std::uint64_t r = plan.sample(prng);
    ASSERT_LT(r, kT);
    const std::uint64_t p = (x + r) % kT;
    const std::uint64_t sx = (kT - r) % kT;
    ASSERT_EQ((sx + p) % kT, x);
  }
}

TEST(MaskTest, ZeroShiftLeavesSharesUnchanged) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = rng() % kT;
    EXPECT_EQ(truncate_proxy_share(v, 0, 19), v);
    EXPECT_EQ(truncate_cloud_share(v, 0, 19), ((1ULL << 19) - v) % (1ULL << 19));
  }
}

TEST(MaskTest, ZeroValueTruncatesToZeroOrOne) {
  const auto plan = MaskPlan::make(gc::GcMode::kTruncated, kT, 11);
  Prng prng(9, "zero");
  const int f = 4, b = 15;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t r = plan.sample(prng);
    const std::uint64_t sum = (truncate_proxy_share(r, f, b) + truncate_cloud_share(r, f, b)) & ((1ULL << b) - 1);
    EXPECT_TRUE(sum == 0 || sum == 1) << sum;
  }
}

// Every (x, r) the plan allows at t = 521, f = 3.
TEST(MaskTest, TruncationSweepSmallModulus) {
  const std::uint64_t t = 521;
  const int m = 6, f = 3;
  const auto plan = MaskPlan::make(gc::GcMode::kTruncated, t, m);
  ASSERT_EQ(plan.lambda, 2);
  const int t_bits = 10, b = t_bits - f;
  const std::int64_t half = std::int64_t{1} << (m - 1);
  std::size_t total = 0, plus_one = 0;
  for (std::int64_t x = -half + 1; x < half; ++x) {
    for (std::uint64_t r = 1ULL << (m - 1); r < (1ULL << (m + plan.lambda)); ++r) {
      const std::uint64_t p = static_cast<std::uint64_t>((x + static_cast<std::int64_t>(r)) % static_cast<std::int64_t>(t));
      const std::uint64_t sum = (truncate_proxy_share(p, f, b) + truncate_cloud_share(r, f, b)) & ((1ULL << b) - 1);
      const std::int64_t signed_sum = sum >= (1ULL << (b - 1)) ? static_cast<std::int64_t>(sum) - (std::int64_t{1} << b)
                                                               : static_cast<std::int64_t>(sum);
      const std::int64_t err = signed_sum - floor_div(x, f);
      ASSERT_TRUE(err == 0 || err == 1) << "x=" << x << " r=" << r;
      ++total;
      plus_one += err == 1;
    }
  }
  RecordProperty("plus_one_fraction", std::to_string(static_cast<double>(plus_one) / total));
  EXPECT_GT(plus_one, 0u);
  EXPECT_LT(plus_one, total);
}

TEST(PlanTest, StagesAndCircuits) {
  auto s = tiny_setup(2, 4, 1);
  const auto plan = make_plan(s.model, ProtocolConfig{});
  ASSERT_EQ(plan->stages.size(), 2u);
  const auto& st0 = plan->stages[0];
  EXPECT_TRUE(st0.conv);
  EXPECT_TRUE(st0.has_activation);
  EXPECT_EQ(st0.window, 4);
  EXPECT_EQ(st0.instances(), 4u * 4 * 4);
  EXPECT_EQ(st0.gc.b, 19 - 4);
  EXPECT_FALSE(plan->stages[1].has_activation);
  EXPECT_EQ(plan->stages[1].fc_period, 64u);
  // Window 0 of channel 1 gathers its 2x2 block.
  EXPECT_EQ(std::vector<std::uint32_t>(st0.gather.begin() + 64, st0.gather.begin() + 68),
            (std::vector<std::uint32_t>{64, 65, 72, 73}));
  const auto [lo, hi] = st0.output_mask_range();
  EXPECT_EQ(lo, 0u);
  EXPECT_EQ(hi, (1ULL << 18) - st0.y_bound);
}

TEST(PlanTest, TruncatedNeedsShift) {
  auto s = tiny_setup(2, 4, 1);
  s.model.layers[0].shift = 0;
  EXPECT_THROW(make_plan(s.model, ProtocolConfig{}), ParameterError);
  ProtocolConfig mt;
  mt.gc_mode = gc::GcMode::kModT;
  EXPECT_NO_THROW(make_plan(s.model, mt));
}

TEST(ProtocolTest, LogKeysSetupCounts) {
  auto s = tiny_setup(2, 1, 2);
  Session session(s.model, ProtocolConfig{}, true);
  const auto res = session.run(s.images);
  const std::size_t n = session.plan().cfg.params.n;
  EXPECT_EQ(res.client_galois_keys, static_cast<std::size_t>(std::log2(n / 2)) + 1);
  std::size_t key_msgs = 0;
  for (const auto& e : res.transcript.entries()) {
    if (e.type != MsgType::kKeyMaterial || e.from != Role::kClient || e.to != Role::kCloud) continue;
    ++key_msgs;
    ByteReader r(e.payload);
    const auto gk = bfv::GaloisKeys::deserialize(r, *session.plan().ctx);
    EXPECT_EQ(gk.size(), res.client_galois_keys);
    EXPECT_NO_THROW(bfv::ReEncryptionKey::deserialize(r, *session.plan().ctx));
    EXPECT_TRUE(r.done());
  }
  EXPECT_EQ(key_msgs, 1u);
}

#ifdef TRIDENT_KEY_ESCROW

TEST(ProtocolTest, ReencryptedProbeDecryptsOnlyUnderProxyKey) {
  auto s = tiny_setup(2, 1, 3);
  Session session(s.model, ProtocolConfig{});
  std::vector<bfv::Ciphertext> probe;
  session.probe().linear_output = [&](std::uint32_t, std::uint32_t stage, const Probe::Cts& cts) {
    if (stage == 0) probe = cts;
  };
  session.run(s.images);
  model::Trace trace;
  model::reference_inference(s.model, s.images[0], &trace);
  std::vector<std::uint64_t> want;
  for (auto v : trace.linear_outputs[0]) want.push_back(to_residue(v, kT));
  EXPECT_EQ(decrypt_elements(session, 0, false, session.escrow_proxy_key(), probe), want);
  EXPECT_NE(decrypt_elements(session, 0, false, session.escrow_client_key(), probe), want);
}

TEST(ProtocolTest, ZeroMaskShowsLinearOutput) {
  auto s = tiny_setup(2, 1, 4);
  ProtocolConfig cfg;
  cfg.gc_mode = gc::GcMode::kModT;
  cfg.zero_mask = true;
  Session session(s.model, cfg);
  std::vector<std::uint64_t> view;
  session.probe().proxy_view = [&](std::uint32_t, std::uint32_t stage, const Probe::Values& p) {
    if (stage == 0) view = p;
  };
  const auto res = session.run(s.images);
  model::Trace trace;
  const auto logits = model::reference_inference(s.model, s.images[0], &trace);
  std::vector<std::uint64_t> want;
  for (auto v : trace.linear_outputs[0]) want.push_back(to_residue(v, kT));
  EXPECT_EQ(view, want);
  EXPECT_EQ(res.logits[0], logits);  // mod_t mode is exact
}

TEST(ProtocolTest, SharesReconstructInsideTheProtocol) {
  auto s = tiny_setup(2, 2, 5);
  for (auto mode : {gc::GcMode::kModT, gc::GcMode::kTruncated}) {
    ProtocolConfig cfg;
    cfg.gc_mode = mode;
    Session session(s.model, cfg);
    std::map<std::uint32_t, Probe::Values> r, p;
    session.probe().mask = [&](std::uint32_t i, std::uint32_t stage, const Probe::Values& v) {
      if (stage == 0) r[i] = v;
    };
    session.probe().proxy_view = [&](std::uint32_t i, std::uint32_t stage, const Probe::Values& v) {
      if (stage == 0) p[i] = v;
    };
    session.run(s.images);
    const auto& mp = session.plan().mask;
    for (std::uint32_t i = 0; i < s.images.size(); ++i) {
      model::Trace trace;
      model::reference_inference(s.model, s.images[i], &trace);
      const auto& x = trace.linear_outputs[0];
      ASSERT_EQ(r[i].size(), x.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        const std::uint64_t sx = (kT - r[i][k]) % kT;
        ASSERT_EQ((sx + p[i][k]) % kT, to_residue(x[k], kT));
        if (mode == gc::GcMode::kTruncated) {
          ASSERT_GE(r[i][k], 1ULL << (mp.value_bits - 1));
          ASSERT_LT(r[i][k], 1ULL << (mp.value_bits + mp.lambda));
          ASSERT_EQ(p[i][k], static_cast<std::uint64_t>(x[k] + static_cast<std::int64_t>(r[i][k])));  // no wrap
        }
      }
    }
  }
}

TEST(ProtocolTest, ActivationRoundMatchesOracleWithinOneLsb) {
  auto s = tiny_setup(2, 2, 6);
  Session session(s.model, ProtocolConfig{});
  std::map<std::uint32_t, std::vector<bfv::Ciphertext>> got;
  std::map<std::uint32_t, std::vector<bfv::Ciphertext>> masked;
  session.probe().stage_input = [&](std::uint32_t i, std::uint32_t stage, const Probe::Cts& cts) {
    if (stage == 1) got[i] = cts;
  };
  session.probe().masked = [&](std::uint32_t i, std::uint32_t stage, const Probe::Cts& cts) {
    if (stage == 0) masked[i] = cts;
  };
  session.run(s.images);
  const auto& st = session.plan().stages[0].stage;
  std::size_t exact = 0, total = 0;
  for (std::uint32_t i = 0; i < s.images.size(); ++i) {
    model::Trace trace;
    model::reference_inference(s.model, s.images[i], &trace);
    const auto& x = trace.linear_outputs[0];
    const auto vals = decrypt_elements(session, 1, true, session.escrow_proxy_key(), got[i]);
    const int w = st.linear_out.width, ow = st.out.width;
    for (int c = 0; c < st.linear_out.channels; ++c) {
      for (int oy = 0; oy < ow; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          std::int64_t best = 0;  // fused ReLU
          for (int dy = 0; dy < 2; ++dy) {
            for (int dx = 0; dx < 2; ++dx) {
              best = std::max(best, floor_div(x[(c * w + 2 * oy + dy) * w + 2 * ox + dx], st.shift));
            }
          }
          const std::int64_t v = centered(vals[(c * ow + oy) * ow + ox], kT);
          ASSERT_TRUE(v == best || v == best + 1) << v << " vs " << best;
          exact += v == best;
          ++total;
        }
      }
    }
    // The activation output is a fresh proxy-key encryption.
    EXPECT_NE(decrypt_elements(session, 1, true, session.escrow_client_key(), got[i]), vals);
    EXPECT_NE(decrypt_elements(session, 0, false, session.escrow_client_key(), masked[i]),
              decrypt_elements(session, 0, false, session.escrow_proxy_key(), masked[i]));
  }
  EXPECT_GT(exact, total / 2);
}

TEST(ProtocolTest, MasksAreFresh) {
  auto s = tiny_setup(4, 2, 7);
  Session session(s.model, ProtocolConfig{});
  std::set<Probe::Values> rs, sys;
  std::size_t rounds = 0;
  session.probe().mask = [&](std::uint32_t, std::uint32_t, const Probe::Values& v) {
    rs.insert(v);
    ++rounds;
  };
  session.probe().output_mask = [&](std::uint32_t, std::uint32_t, const Probe::Values& v) { sys.insert(v); };
  session.run(s.images);
  EXPECT_EQ(rounds, 2u * 3);
  EXPECT_EQ(rs.size(), rounds);
  EXPECT_EQ(sys.size(), rounds);
}

TEST(ProtocolTest, TranscriptNeverCarriesSecretsToTheWrongParty) {
  auto s = tiny_setup(2, 2, 8);
  Session session(s.model, ProtocolConfig{}, true);
  const auto res = session.run(s.images);
  const Bytes sc = session.escrow_client_key().to_bytes();
  const Bytes sp = session.escrow_proxy_key().to_bytes();
  // Skip the tag and owner bytes: match the coefficients themselves.
  const auto sc_body = std::span(sc).subspan(2);
  const auto sp_body = std::span(sp).subspan(2);
  EXPECT_FALSE(res.transcript.payload_contains(Role::kCloud, sc_body));
  EXPECT_FALSE(res.transcript.payload_contains(Role::kProxy, sc_body));
  EXPECT_FALSE(res.transcript.payload_contains(Role::kCloud, sp_body));
  EXPECT_FALSE(res.transcript.payload_contains(Role::kClient, sc_body));
  EXPECT_TRUE(res.transcript.payload_contains(Role::kProxy, sp_body));  // the scanner does see keys
  for (const auto& e : res.transcript.entries()) {
    const bool secret = e.type == MsgType::kKeyMaterial && e.sub == static_cast<std::uint8_t>(KeyKind::kProxySecret);
    if (secret) EXPECT_EQ(e.to, Role::kProxy);
  }
}

#endif  // TRIDENT_KEY_ESCROW

TEST(ProtocolTest, IdentityModelPassesThrough) {
  model::ModelSpec m;
  m.name = "identity";
  m.input = {1, 4};
  m.value_bits = 8;
  model::LayerSpec conv;
  conv.kind = model::LayerKind::kConv;
  conv.out_channels = 1;
  conv.kernel = 1;
  conv.shift = 1;
  conv.weights = {2};
  model::LayerSpec relu;
  relu.kind = model::LayerKind::kRelu;
  model::LayerSpec fc;
  fc.kind = model::LayerKind::kFc;
  fc.out_features = 16;
  fc.weights.assign(256, 0);
  for (int i = 0; i < 16; ++i) fc.weights[i * 16 + i] = 1;
  m.layers = {conv, relu, fc};
  std::vector<std::int64_t> img(16);
  for (int i = 0; i < 16; ++i) img[i] = i * 3 % 17;
  for (auto mode : {gc::GcMode::kModT, gc::GcMode::kTruncated}) {
    ProtocolConfig cfg;
    cfg.gc_mode = mode;
    Session session(m, cfg);
    EXPECT_EQ(session.run({img}).logits[0], img) << gc::to_string(mode);
  }
}

TEST(ProtocolTest, DepthTwoAgreesWithOracle) {
  auto s = tiny_setup(2, 12, 9);
  Session session(s.model, ProtocolConfig{});
  const auto res = session.run(s.images);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < s.images.size(); ++i) {
    const auto band = model::reference_band(s.model, s.images[i]);
    EXPECT_TRUE(band.contains(res.logits[i])) << i;
    agree += model::argmax(res.logits[i]) == model::argmax(model::reference_inference(s.model, s.images[i]));
  }
  EXPECT_GE(agree, s.images.size() - 1);
}

TEST(ProtocolTest, ModTModeIsExact) {
  auto s = tiny_setup(4, 2, 10);
  ProtocolConfig cfg;
  cfg.gc_mode = gc::GcMode::kModT;
  cfg.delivery = gc::LabelDelivery::kDealer;
  Session session(s.model, cfg);
  const auto res = session.run(s.images);
  for (std::size_t i = 0; i < s.images.size(); ++i) {
    EXPECT_EQ(res.logits[i], model::reference_inference(s.model, s.images[i]));
  }
}

TEST(ProtocolTest, DeterministicUnderSeed) {
  auto s = tiny_setup(2, 2, 12);
  Session a(s.model, ProtocolConfig{}, true), b(s.model, ProtocolConfig{}, true);
  const auto ra = a.run(s.images), rb = b.run(s.images);
  EXPECT_EQ(ra.logits, rb.logits);
  ASSERT_EQ(ra.transcript.entries().size(), rb.transcript.entries().size());
  for (std::size_t i = 0; i < ra.transcript.entries().size(); ++i) {
    EXPECT_EQ(ra.transcript.entries()[i].payload, rb.transcript.entries()[i].payload) << i;
  }
  ProtocolConfig other;
  other.seed = 99;
  Session c(s.model, other, true);
  const auto rc = c.run(s.images);
  EXPECT_NE(ra.transcript.entries()[0].payload, rc.transcript.entries()[0].payload);
}

TEST(ProtocolTest, ClientTrafficIsDepthIndependent) {
  auto d2 = tiny_setup(2, 2, 13);
  auto d4 = tiny_setup(4, 2, 13);
  const auto r2 = Session(d2.model, ProtocolConfig{}).run(d2.images);
  const auto r4 = Session(d4.model, ProtocolConfig{}).run(d4.images);
  for (std::uint32_t i = 0; i < 2; ++i) {
    EXPECT_EQ(r2.transcript.client_inference_bytes(i), r4.transcript.client_inference_bytes(i));
    EXPECT_LT(r2.transcript.client_inference_bytes(i), r2.transcript.inference_bytes(i) / 10);
    EXPECT_EQ(r2.transcript.reencrypted_messages(i), 1u);
    EXPECT_EQ(r4.transcript.reencrypted_messages(i), 1u);
  }
  std::uint64_t reenc2 = 0, reenc4 = 0;
  for (const auto& st : r2.ops.stages) reenc2 += st.reencryptions;
  for (const auto& st : r4.ops.stages) reenc4 += st.reencryptions;
  EXPECT_EQ(reenc2, reenc4);
}

TEST(ProtocolTest, RoundBandwidthMatchesCircuitStats) {
  auto s = tiny_setup(2, 1, 14);
  for (auto delivery : {gc::LabelDelivery::kBaseOt, gc::LabelDelivery::kDealer}) {
    ProtocolConfig cfg;
    cfg.delivery = delivery;
    Session session(s.model, cfg);
    const auto res = session.run(s.images);
    const auto& sp = session.plan().stages[0];
    const auto stats = gc::circuit_stats(sp.circuit, sp.gc, delivery);
    const std::size_t inst = sp.instances();
    const std::size_t framing = kFrameHeaderBytes + kRoutingBytes;
    std::size_t bundle = 0, labels = 0;
    for (const auto& e : res.transcript.entries()) {
      if (e.stage != 0) continue;
      if (e.type == MsgType::kGarbledBundle) bundle += e.bytes;
      if (e.type == MsgType::kEvalLabels) labels += e.bytes;
    }
    // Tables dominate the bundle; the remainder is garbler labels, decoding
    // data and headers.
    const std::size_t tables = inst * stats.garbled_bytes;
    const std::size_t garbler_labels = inst * sp.circuit.garbler_inputs.size() * gc::kLabelBytes;
    const std::size_t decoding = inst * sp.circuit.outputs.size() * (1 + 16);
    ASSERT_GE(bundle, tables + garbler_labels + decoding);
    EXPECT_LE(bundle - (tables + garbler_labels + decoding), 256u);
    if (delivery == gc::LabelDelivery::kBaseOt) {
      // Request (8 + 32k) plus response (8 + 64k).
      EXPECT_EQ(labels, inst * stats.online_label_bytes + 16 + 2 * framing);
    } else {
      // Choice bits up, one label per bit down.
      EXPECT_EQ(labels, inst * sp.circuit.evaluator_inputs.size() + 4 + inst * stats.online_label_bytes + 2 * framing);
    }
  }
}

TEST(ProtocolTest, SimAndNetAgree) {
  auto s = tiny_setup(2, 2, 15);
  Session session(s.model, ProtocolConfig{});
  const auto sim = session.run(s.images);
  const auto net = session.run_tcp(s.images);
  EXPECT_EQ(sim.logits, net.logits);
  EXPECT_EQ(sim.transcript.total_bytes(), net.transcript.total_bytes());
  EXPECT_EQ(sim.transcript.entries().size(), net.transcript.entries().size());
}

TEST(ProtocolTest, EmptyImageRejected) {
  auto s = tiny_setup(2, 1, 16);
  Session session(s.model, ProtocolConfig{});
  EXPECT_THROW(session.run({{}}), ParameterError);
  EXPECT_THROW(session.run({}), ParameterError);
  EXPECT_THROW(session.run({std::vector<std::int64_t>(10, 1)}), ParameterError);
}

TEST(ProtocolTest, TamperedTableIsAnIntegrityError) {
  auto s = tiny_setup(2, 1, 17);
  Session session(s.model, ProtocolConfig{});
  session.set_interceptor([](Message& m) {
    if (m.type == MsgType::kGarbledBundle) m.body[m.body.size() / 2] ^= 0x01;
  });
  try {
    session.run(s.images);
    FAIL() << "tampering went unnoticed";
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("proxy, phase activation"), std::string::npos) << e.what();
    EXPECT_EQ(e.exit_code(), 4);
  }
}

TEST(ProtocolTest, ReplayedBundleIsAProtocolError) {
  auto s = tiny_setup(2, 2, 18);
  Session session(s.model, ProtocolConfig{});
  Bytes first;
  session.set_interceptor([&](Message& m) {
    if (m.type != MsgType::kGarbledBundle) return;
    if (m.inference == 0) first = m.body;
    else m.body = first;
  });
  EXPECT_THROW(session.run(s.images), ProtocolError);

  // The same bundle delivered twice to one proxy.
  auto plan = make_plan(s.model, ProtocolConfig{});
  Proxy proxy(plan);
  Message m;
  m.from = Role::kCloud;
  m.to = Role::kProxy;
  m.type = MsgType::kGarbledBundle;
  m.body = first;
  EXPECT_NO_THROW(proxy.handle(m));
  EXPECT_THROW(proxy.handle(m), ProtocolError);
}

TEST(ProtocolTest, NoiseExhaustionIsDetected) {
  auto s = tiny_setup(2, 1, 19);
  ProtocolConfig cfg;
  cfg.w_A = std::uint64_t{1} << 50;
  cfg.w_SW = std::uint64_t{1} << 50;
  Session session(s.model, cfg);
  EXPECT_FALSE(session.plan().warnings.empty());
  EXPECT_THROW(session.run(s.images), IntegrityError);
}

TEST(ProtocolTest, MissingRotationKeyNamesTheStage) {
  auto s = tiny_setup(2, 1, 20);
  ProtocolConfig cfg;
  cfg.key_mode = bfv::KeyMode::kAllKeys;
  Session session(s.model, cfg);
  // Drop the client's Galois keys from the key material.
  session.set_interceptor([&](Message& m) {
    if (m.type != MsgType::kKeyMaterial || m.from != Role::kClient || m.to != Role::kCloud) return;
    ByteReader r(m.body);
    bfv::GaloisKeys::deserialize(r, *session.plan().ctx);
    const auto rk = bfv::ReEncryptionKey::deserialize(r, *session.plan().ctx);
    ByteWriter w;
    bfv::GaloisKeys(bfv::KeyMode::kAllKeys, bfv::KeyOwner::kClient).serialize(w);
    rk.serialize(w);
    m.body = w.take();
  });
  try {
    session.run(s.images);
    FAIL();
  } catch (const MissingKeyError& e) {
    EXPECT_NE(std::string(e.what()).find("stage 0 (layer 0)"), std::string::npos) << e.what();
    EXPECT_EQ(e.exit_code(), 3);
  }
}

}  // namespace
}  // namespace trident::protocol
