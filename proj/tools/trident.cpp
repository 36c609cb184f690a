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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "run_config.hpp"
#include "trident/bfv/ciphertext.hpp"
#include "trident/bfv/evaluator.hpp"
#include "trident/bfv/keys.hpp"
#include "trident/common/error.hpp"
#include "trident/gc/activations.hpp"
#include "trident/gc/stats.hpp"
#include "trident/linear/conv.hpp"
#include "trident/model/model.hpp"
#include "trident/noise/noise_model.hpp"
#include "trident/protocol/net.hpp"
#include "trident/protocol/session.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace trident::tools {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

std::string human_bytes(std::size_t b) {
  char buf[32];
  if (b >= 1u << 20) std::snprintf(buf, sizeof buf, "%.2f MB", b / 1048576.0);
  else if (b >= 1u << 10) std::snprintf(buf, sizeof buf, "%.1f KB", b / 1024.0);
  else std::snprintf(buf, sizeof buf, "%zu B", b);
  return buf;
}

// Shared run-configuration flags; each overrides the config file when given.
struct ConfigFlags {
  std::string path;
  std::string preset, key_mode, gc_mode, delivery;
  int lambda = 0, value_bits = 0, f = 0;
  std::uint64_t seed = 0;
  CLI::Option *o_lambda = nullptr, *o_value_bits = nullptr, *o_seed = nullptr, *o_f = nullptr;

  void add(CLI::App* app, bool with_f = false) {
    app->add_option("--config", path, std::string("run configuration (JSON); default $") + kConfigEnv);
    app->add_option("--preset", preset, "parameter preset: toy or paper");
    app->add_option("--key-mode", key_mode, "all-keys or log-keys");
    app->add_option("--gc-mode", gc_mode, "mod_t or truncated");
    app->add_option("--delivery", delivery, "label delivery: base_ot or dealer (test only)");
    o_lambda = app->add_option("--lambda", lambda, "statistical hiding slack bits");
    o_value_bits = app->add_option("--value-bits", value_bits, "override the model's value bound m");
    o_seed = app->add_option("--seed", seed, "seed for every random choice");
    if (with_f) o_f = app->add_option("--f", f, "truncated LSBs");
  }

  RunConfig resolve() const {
    RunConfig c = load_run_config(path);
    if (!preset.empty()) c.preset = preset;
    if (!key_mode.empty()) c.key_mode = bfv::parse_key_mode(key_mode);
    if (!gc_mode.empty()) c.gc_mode = gc::parse_gc_mode(gc_mode);
    if (!delivery.empty()) c.delivery = gc::parse_label_delivery(delivery);
    if (o_lambda && o_lambda->count()) c.lambda = lambda;
    if (o_value_bits && o_value_bits->count()) c.value_bits = value_bits;
    if (o_seed && o_seed->count()) c.seed = seed;
    if (o_f && o_f->count()) c.f = f;
    c.validate();
    return c;
  }
};

std::vector<std::vector<std::int64_t>> load_images(const std::string& path, std::size_t random_count,
                                                   std::int64_t input_max, const model::ModelSpec& m,
                                                   std::uint64_t seed, std::size_t limit) {
  std::vector<std::vector<std::int64_t>> images;
  if (!path.empty()) {
    auto cal = model::load_calibration(path);
    if (cal.shape.channels != m.input.channels || cal.shape.width != m.input.width) {
      throw ParameterError("inputs in " + path + " do not match the model input shape");
    }
    images = std::move(cal.images);
  } else {
    images = model::random_inputs(m.input, random_count, 0, input_max, seed).images;
  }
  if (limit && images.size() > limit) images.resize(limit);
  if (images.empty()) throw ParameterError("no input images");
  return images;
}

ordered_json logits_json(const model::ModelSpec& m, const RunConfig& cfg,
                         const std::vector<std::vector<std::int64_t>>& logits) {
  ordered_json j;
  j["model"] = m.name;
  j["model_checksum"] = model::model_checksum(m);
  j["config"] = cfg.to_json();
  j["logits"] = logits;
  std::vector<std::size_t> am;
  for (const auto& l : logits) am.push_back(model::argmax(l));
  j["argmax"] = am;
  return j;
}

ordered_json transcript_rows(const protocol::Transcript& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& e : t.entries()) {
    rows.push_back({{"party", protocol::to_string(e.from)},
                    {"peer", protocol::to_string(e.to)},
                    {"phase", protocol::phase_of(e.type)},
                    {"message", protocol::to_string(e.type)},
                    {"inference", e.inference},
                    {"stage", e.stage},
                    {"traffic", protocol::to_string(e.traffic)},
                    {"bytes", e.bytes}});
  }
  return rows;
}

void print_ops(const protocol::OpsReport& ops) {
  std::printf("%-9s %-5s %7s %7s %7s %9s %11s %8s %9s\n", "inference", "stage", "pmult", "autom", "add", "keyswitch",
              "reencrypt", "gc_inst", "and_gates");
  for (const auto& s : ops.stages) {
    std::printf("%-9u %-5u %7llu %7llu %7llu %9llu %11llu %8llu %9llu\n", s.inference, s.stage,
                static_cast<unsigned long long>(s.linear.pmult), static_cast<unsigned long long>(s.linear.autom),
                static_cast<unsigned long long>(s.linear.add + s.linear.merge_add),
                static_cast<unsigned long long>(s.keyswitches), static_cast<unsigned long long>(s.reencryptions),
                static_cast<unsigned long long>(s.gc_instances), static_cast<unsigned long long>(s.and_gates));
  }
}

// keygen

int cmd_keygen(const ConfigFlags& flags, const std::string& out_dir, const std::string& model_path,
               const std::string& report) {
  const RunConfig cfg = flags.resolve();
  std::optional<model::ModelSpec> m;
  if (!model_path.empty()) m = model::load_model_file(model_path);
  const RingParams rp = cfg.params(m ? &*m : nullptr);
  const auto ctx = bfv::Context::create(rp);

  std::set<std::int64_t> steps;
  noise::BaseChoice bases;
  if (m) {
    const auto plan = protocol::make_plan(*m, cfg.protocol(*m));
    bases = plan->bases;
    steps = plan->client_steps();
  } else {
    noise::LinearShape conv;
    conv.name = "conv";
    bases = noise::select_bases(rp, {conv}, cfg.margin_bits, noise::Variant::kImpala, cfg.key_mode);
  }

  fs::create_directories(out_dir);
  Prng kp = Prng(cfg.seed, "client").derive("keys");
  const auto s_c = bfv::keygen(*ctx, bfv::KeyOwner::kClient, kp);
  const auto s_p = bfv::keygen(*ctx, bfv::KeyOwner::kProxy, kp);
  const auto gk = bfv::make_galois_keys(*ctx, s_c, cfg.key_mode, bases.w_A, kp, steps);
  const auto rk = bfv::reenc_keygen(*ctx, s_c, s_p, bases.w_SW, kp);
  ByteWriter rkw;
  rk.serialize(rkw);

  const std::vector<std::pair<std::string, Bytes>> files = {
      {"client.sk", s_c.to_bytes()}, {"proxy.sk", s_p.to_bytes()}, {"client.galois", gk.to_bytes()},
      {"client.reenc", rkw.take()}};
  std::printf("preset %s  n=%zu  t=%llu  w_A=2^%d  w_SW=2^%d\n", cfg.preset_for(m ? &*m : nullptr).c_str(), rp.n,
              static_cast<unsigned long long>(rp.t), static_cast<int>(std::log2(static_cast<double>(bases.w_A))),
              static_cast<int>(std::log2(static_cast<double>(bases.w_SW))));
  ordered_json j;
  j["key_mode"] = bfv::to_string(cfg.key_mode);
  for (const auto& [name, bytes] : files) {
    write_text((fs::path(out_dir) / name).string(), std::string(bytes.begin(), bytes.end()));
    std::printf("  %-14s %12zu bytes\n", name.c_str(), bytes.size());
    j["files"][name] = bytes.size();
  }

  // Footprint of both key modes for the same rotations.
  const std::size_t per_key = (gk.to_bytes().size() - 8) / std::max<std::size_t>(gk.size(), 1);
  std::printf("\n%-10s %8s %14s\n", "mode", "keys", "bytes");
  for (auto mode : {bfv::KeyMode::kAllKeys, bfv::KeyMode::kLogKeys}) {
    const std::size_t count = bfv::required_galois_elements(rp.n, mode, steps).size();
    const std::size_t bytes = mode == cfg.key_mode ? gk.to_bytes().size() : 8 + count * per_key;
    std::printf("%-10s %8zu %14zu%s\n", bfv::to_string(mode), count, bytes,
                mode == cfg.key_mode ? "" : "  (projected)");
    j["footprint"][bfv::to_string(mode)] = {{"keys", count}, {"bytes", bytes}};
  }
  if (!report.empty()) write_json(report, j);
  return 0;
}

// sim

int cmd_sim(const ConfigFlags& flags, const std::string& model_path, const std::string& input, std::size_t random_count,
            std::int64_t input_max, std::size_t limit, const std::string& transport, const std::string& fault, bool check,
            const std::string& logits_out, const std::string& transcript_csv, const std::string& ops_csv,
            const std::string& report) {
  RunConfig cfg = flags.resolve();
  const auto m = model::load_model_file(model_path);
  if (fault == "noise") {
    cfg.w_A = std::uint64_t{1} << 50;
    cfg.w_SW = std::uint64_t{1} << 50;
  }
  const auto images = load_images(input, random_count, input_max, m, cfg.seed + 1, limit);
  protocol::Session session(m, cfg.protocol(m));
  if (fault == "gc-table") {
    session.set_interceptor([](protocol::Message& msg) {
      if (msg.type == protocol::MsgType::kGarbledBundle) msg.body[msg.body.size() / 2] ^= 0x01;
    });
  } else if (fault == "drop-keys") {
    session.set_interceptor([&](protocol::Message& msg) {
      if (msg.type != protocol::MsgType::kKeyMaterial || msg.to != protocol::Role::kCloud) return;
      if (msg.from != protocol::Role::kClient) return;
      ByteReader r(msg.body);
      bfv::GaloisKeys::deserialize(r, *session.plan().ctx);
      const auto rk = bfv::ReEncryptionKey::deserialize(r, *session.plan().ctx);
      ByteWriter w;
      bfv::GaloisKeys(cfg.key_mode, bfv::KeyOwner::kClient).serialize(w);
      rk.serialize(w);
      msg.body = w.take();
    });
  } else if (!fault.empty() && fault != "none" && fault != "noise") {
    throw ParameterError("unknown fault '" + fault + "' (expected gc-table, noise or drop-keys)");
  }
  for (const auto& w : session.plan().warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  const auto t0 = Clock::now();
  const auto res = transport == "tcp" ? session.run_tcp(images) : session.run(images);
  const double wall = seconds_since(t0);
  if (transport != "tcp" && transport != "sim") throw ParameterError("transport must be sim or tcp");

  std::size_t out_of_band = 0, agree = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const bool ok = model::reference_band(m, images[i]).contains(res.logits[i]);
    out_of_band += !ok;
    agree += model::argmax(res.logits[i]) == model::argmax(model::reference_inference(m, images[i]));
    std::printf("image %zu: argmax %zu  logits", i, model::argmax(res.logits[i]));
    for (auto v : res.logits[i]) std::printf(" %lld", static_cast<long long>(v));
    std::printf("%s\n", check ? (ok ? "  [in band]" : "  [MISMATCH]") : "");
  }
  if (check) std::printf("argmax agreement with the plaintext reference: %zu/%zu\n", agree, images.size());
  std::printf("\n%s", res.transcript.summary().c_str());
  for (std::uint32_t i = 0; i < images.size(); ++i) {
    std::printf("inference %u: client %s of %s (%.3f%%), re-encrypted messages %zu\n", i,
                human_bytes(res.transcript.client_inference_bytes(i)).c_str(),
                human_bytes(res.transcript.inference_bytes(i)).c_str(),
                100.0 * res.transcript.client_inference_bytes(i) / res.transcript.inference_bytes(i),
                res.transcript.reencrypted_messages(i));
  }
  std::printf("\n");
  print_ops(res.ops);
  std::printf("\nwall time %.2f s (informational)\n", wall);

  const auto lj = logits_json(m, cfg, res.logits);
  if (!logits_out.empty()) write_json(logits_out, lj);
  if (!transcript_csv.empty()) write_text(transcript_csv, res.transcript.to_csv());
  if (!ops_csv.empty()) write_text(ops_csv, res.ops.to_csv());
  if (!report.empty()) {
    ordered_json j = lj;
    j["transport"] = transport;
    j["transcript"] = transcript_rows(res.transcript);
    j["warnings"] = res.warnings;
    j["wall_seconds_informational"] = wall;
    write_json(report, j);
  }
  if (check && out_of_band) {
    throw IntegrityError(std::to_string(out_of_band) + " inference(s) decrypted outside the reference band");
  }
  return 0;
}

// role

int cmd_role(const ConfigFlags& flags, const std::string& role_name, const std::string& model_path,
             const std::string& input, std::size_t random_count, std::int64_t input_max, std::size_t limit,
             const std::string& listen,
             const std::vector<std::string>& peer_specs, const std::string& logits_out) {
  const RunConfig cfg = flags.resolve();
  const auto role = protocol::parse_role(role_name);
  const auto m = model::load_model_file(model_path);
  auto endpoints = cfg.endpoints;
  for (const auto& spec : peer_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw ParameterError("--peer expects role=host:port, got '" + spec + "'");
    endpoints[protocol::parse_role(spec.substr(0, eq))] = protocol::Endpoint::parse(spec.substr(eq + 1));
  }
  if (!listen.empty()) endpoints[role] = protocol::Endpoint::parse(listen);
  for (auto r : {protocol::Role::kClient, protocol::Role::kCloud, protocol::Role::kProxy}) {
    if (!endpoints.count(r)) throw ParameterError(std::string("no endpoint for ") + protocol::to_string(r));
  }
  const auto plan = protocol::make_plan(m, cfg.protocol(m));
  for (const auto& w : plan->warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  std::unique_ptr<protocol::Party> party;
  protocol::Client* client = nullptr;
  if (role == protocol::Role::kClient) {
    auto c = std::make_unique<protocol::Client>(plan, load_images(input, random_count, input_max, m, cfg.seed + 1, limit));
    client = c.get();
    party = std::move(c);
  } else if (role == protocol::Role::kCloud) {
    party = std::make_unique<protocol::Cloud>(plan, m);
  } else {
    party = std::make_unique<protocol::Proxy>(plan);
  }

  protocol::Listener listener(endpoints[role]);
  protocol::Transcript transcript;
  protocol::NetOptions opts;
  opts.transcript = &transcript;
  std::fprintf(stderr, "%s listening on %s\n", protocol::to_string(role), endpoints[role].str().c_str());
  const auto t0 = Clock::now();
  protocol::run_party(*party, listener, endpoints, opts);
  std::printf("%s done in %.2f s (informational), sent %s\n", protocol::to_string(role), seconds_since(t0),
              human_bytes(transcript.total_bytes()).c_str());
  if (client) {
    for (std::size_t i = 0; i < client->logits().size(); ++i) {
      std::printf("image %zu: argmax %zu\n", i, model::argmax(client->logits()[i]));
    }
    if (!logits_out.empty()) write_json(logits_out, logits_json(m, cfg, client->logits()));
  }
  return 0;
}

// noise-report

int cmd_noise_report(const ConfigFlags& flags, const std::string& model_path, const std::string& report) {
  const RunConfig cfg = flags.resolve();
  const auto m = model::load_model_file(model_path);
  const auto plan = protocol::make_plan(m, cfg.protocol(m));
  const auto np = noise::NoiseParams::make(plan->cfg.params, plan->bases.w_A, plan->bases.w_SW, cfg.key_mode);
  std::printf("preset %s  key mode %s  w_A=%llu (l_A=%d)  w_SW=%llu (l_SW=%d)  budget %.2f bits\n",
              cfg.preset_for(&m).c_str(), bfv::to_string(cfg.key_mode),
              static_cast<unsigned long long>(np.w_A), np.l_A, static_cast<unsigned long long>(np.w_SW), np.l_SW,
              std::log2(static_cast<double>(np.ring.q) / (2.0 * np.ring.t)));
  std::printf("%-6s %-10s %-8s %14s %14s %14s\n", "layer", "name", "variant", "estimate_bits", "keyswitch_bits",
              "budget_bits");
  ordered_json rows = ordered_json::array();
  for (auto variant : {noise::Variant::kImpala, noise::Variant::kGazelle}) {
    for (const auto& r : noise::noise_report(np, plan->network(), variant)) {
      std::printf("%-6d %-10s %-8s %14.2f %14.2f %14.2f\n", r.layer, r.name.c_str(), noise::to_string(variant),
                  r.estimate_bits, r.keyswitch_bits, r.budget_remaining_bits);
      rows.push_back({{"layer", r.layer},
                      {"name", r.name},
                      {"variant", noise::to_string(variant)},
                      {"subgaussian_param", r.subgaussian_param},
                      {"estimate_bits", r.estimate_bits},
                      {"keyswitch_bits", r.keyswitch_bits},
                      {"budget_remaining_bits", r.budget_remaining_bits}});
    }
  }
  if (!report.empty()) {
    ordered_json j;
    j["w_A"] = np.w_A;
    j["w_SW"] = np.w_SW;
    j["rows"] = rows;
    write_json(report, j);
  }
  return 0;
}

// gc-stats

int cmd_gc_stats(const ConfigFlags& flags, std::size_t count, const std::string& report) {
  const RunConfig cfg = flags.resolve();
  const RingParams rp = cfg.params(nullptr);
  const int t_bits = rp.t_bits();
  if (cfg.f < 1 || cfg.f >= t_bits) throw ParameterError("f must be in [1, t_bits)");
  const auto tr = gc::GcConfig::truncated(t_bits, cfg.f);
  const auto mt = gc::GcConfig::mod_t(rp.t);
  ordered_json rows = ordered_json::array();
  std::printf("%zu instances, t_bits=%d, truncated b=%d, delivery %s\n\n", count, t_bits, tr.b,
              gc::to_string(cfg.delivery));
  std::printf("%-8s %-10s %10s %16s %16s\n", "circuit", "mode", "and_gates", "offline_bytes", "online_bytes");
  for (const char* name : {"relu", "maxpool"}) {
    const bool relu = std::string(name) == "relu";
    const auto ct = relu ? gc::build_relu(tr) : gc::build_maxpool(tr);
    const auto cm = relu ? gc::build_relu(mt) : gc::build_maxpool(mt);
    const auto st = gc::circuit_stats(ct, tr, cfg.delivery);
    const auto sm = gc::circuit_stats(cm, mt, cfg.delivery);
    for (const auto& [mode, s] : {std::pair{"mod_t", sm}, std::pair{"truncated", st}}) {
      std::printf("%-8s %-10s %10zu %16zu %16zu\n", name, mode, s.and_gates, s.garbled_bytes * count,
                  s.online_label_bytes * count);
      rows.push_back({{"circuit", name},
                      {"mode", mode},
                      {"and_gates", s.and_gates},
                      {"offline_bytes", s.garbled_bytes * count},
                      {"online_bytes", s.online_label_bytes * count}});
    }
    const double off = static_cast<double>(st.garbled_bytes) / sm.garbled_bytes;
    const double on = static_cast<double>(st.online_label_bytes) / sm.online_label_bytes;
    std::printf("%-8s %-10s offline ratio %.3f  online ratio %.3f\n", name, "ratio", off, on);
    rows.push_back({{"circuit", name}, {"mode", "ratio"}, {"offline_ratio", off}, {"online_ratio", on}});
  }
  if (!report.empty()) write_json(report, {{"rows", rows}});
  return 0;
}

// gen-model

int cmd_gen_model(int depth, int width, int channels, int classes, int shift, double alpha, std::int64_t weight_bound,
                  std::int64_t input_max, std::uint64_t seed, const std::string& preset, const std::string& out,
                  const std::string& inputs_out, std::size_t count) {
  const RingParams rp = RingParams::preset(preset);
  auto skel = model::tiny_cnn_skeleton(width, channels, classes, depth, shift);
  skel.preset = preset;
  auto gen = model::gen_random_model(skel, alpha, seed, weight_bound);
  auto& m = gen.model;
  const auto cal = model::random_inputs(m.input, count, 0, input_max, seed + 1);
  // Declared bound: worst case over the calibration set, one bit of slack.
  const auto peak = model::max_linear_magnitude(m, cal.images);
  int bits = 2;
  while ((std::int64_t{1} << (bits - 1)) <= 2 * peak) ++bits;
  m.value_bits = bits;
  model::certify_bound(m, cal.images, bits, rp.t);
  model::save_model_file(m, out);
  if (!inputs_out.empty()) model::save_calibration(cal, inputs_out);
  std::printf("%s: %zu layers, value_bits %d, realized sparsity %.4f, checksum %s\n", out.c_str(), m.layers.size(),
              bits, gen.realized_sparsity, model::model_checksum(m).c_str());
  return 0;
}

// bench

struct BenchRow {
  std::string suite, name;
  int stage = -1;
  std::uint64_t pmult = 0, autom = 0, add = 0, and_gates = 0;
  std::size_t offline = 0, online = 0;
  double wall_ms = 0;
};

void bench_tiny(const RunConfig& cfg, std::vector<BenchRow>& rows) {
  for (int depth : {2, 4}) {
    auto skel = model::tiny_cnn_skeleton(8, 4, 10, depth, 4);
    auto m = model::gen_random_model(skel, 0.5, cfg.seed).model;
    const auto images = model::random_inputs(m.input, 2, 0, 16, cfg.seed + 1).images;
    const auto peak = model::max_linear_magnitude(m, images);
    int bits = 2;
    while ((std::int64_t{1} << (bits - 1)) <= 2 * peak) ++bits;
    m.value_bits = bits;
    protocol::Session session(m, cfg.protocol(m));
    const auto t0 = Clock::now();
    const auto res = session.run(images);
    const double wall = seconds_since(t0) * 1000.0 / images.size();
    for (const auto& st : res.ops.stages) {
      if (st.inference != 0) continue;
      BenchRow r{"tiny", "depth" + std::to_string(depth), static_cast<int>(st.stage), st.linear.pmult, st.linear.autom,
                 st.linear.add + st.linear.merge_add, 0, 0, 0, 0};
      r.offline = res.transcript.bytes([&](const protocol::TranscriptEntry& e) {
        return e.inference == 0 && e.stage == st.stage && e.traffic == protocol::Traffic::kOffline &&
               e.type != protocol::MsgType::kKeyMaterial;
      });
      r.online = res.transcript.bytes([&](const protocol::TranscriptEntry& e) {
        return e.inference == 0 && e.stage == st.stage && e.traffic == protocol::Traffic::kOnline &&
               e.type != protocol::MsgType::kDone;
      });
      rows.push_back(r);
    }
    std::uint64_t gates = 0;
    for (const auto& st : res.ops.stages) gates += st.inference == 0 ? st.and_gates : 0;
    rows.push_back({"tiny", "depth" + std::to_string(depth), -1, 0, 0, 0, gates,
                    res.transcript.bytes([](const auto& e) { return e.traffic == protocol::Traffic::kOffline; }),
                    res.transcript.bytes([](const auto& e) { return e.traffic == protocol::Traffic::kOnline; }), wall});
  }
}

void bench_sparsity(const RunConfig& cfg, std::vector<BenchRow>& rows) {
  const RingParams rp = cfg.params(nullptr);
  const auto ctx = bfv::Context::create(rp);
  Prng prng(cfg.seed, "bench-sparsity");
  const auto sk = bfv::keygen(*ctx, bfv::KeyOwner::kClient, prng);
  linear::ConvSpec spec;
  spec.c_i = spec.c_o = 4;
  spec.w = 8;
  const auto layout = linear::PackedLayout::make(spec.c_i, spec.w, ctx->row_size());
  std::vector<std::uint64_t> image(spec.c_i * spec.w * spec.w);
  for (auto& v : image) v = prng.uniform_below(16);
  const auto packed = linear::pack_input(image, layout, rp.n);
  std::vector<bfv::Ciphertext> in;
  for (const auto& s : packed) in.push_back(bfv::encrypt(*ctx, sk, ctx->encode(s), prng));
  const auto bases = noise::select_bases(rp, {{noise::LinearShape::Kind::kConv, 4, 3, 0, "conv"}}, cfg.margin_bits,
                                         noise::Variant::kImpala, bfv::KeyMode::kAllKeys);
  const auto keys = bfv::make_galois_keys(*ctx, sk, bfv::KeyMode::kAllKeys, bases.w_A, prng);
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 0.9}) {
    std::vector<std::int64_t> kernels(spec.kernel_size());
    for (auto& k : kernels) k = prng.uniform_below(1000) < alpha * 1000 ? 0 : 1 + static_cast<std::int64_t>(prng.uniform_below(7));
    const auto prepared = linear::prepare_conv(kernels, spec, *ctx);
    bfv::Evaluator eval(ctx);
    const auto t0 = Clock::now();
    const auto res = linear::he_conv(eval, in, prepared, keys);
    char name[32];
    std::snprintf(name, sizeof name, "alpha=%.2f", alpha);
    rows.push_back({"sparsity", name, 0, res.ops.pmult, res.ops.autom, res.ops.add + res.ops.merge_add, 0, 0, 0,
                    seconds_since(t0) * 1000.0});
  }
}

void bench_gc(const RunConfig& cfg, std::vector<BenchRow>& rows) {
  const RingParams rp = cfg.params(nullptr);
  const auto tr = gc::GcConfig::truncated(rp.t_bits(), cfg.f);
  const auto mt = gc::GcConfig::mod_t(rp.t);
  const std::uint32_t count = 1000;
  for (const auto& [name, c, gcfg] : {std::tuple{"relu/mod_t", gc::build_relu(mt), mt},
                                      std::tuple{"relu/truncated", gc::build_relu(tr), tr},
                                      std::tuple{"maxpool/mod_t", gc::build_maxpool(mt), mt},
                                      std::tuple{"maxpool/truncated", gc::build_maxpool(tr), tr}}) {
    const auto st = gc::circuit_stats(c, gcfg, cfg.delivery);
    gc::Seed seed{};
    seed[0] = static_cast<std::uint8_t>(cfg.seed);
    const auto t0 = Clock::now();
    const auto g = gc::garble(c, gcfg, count, seed);
    rows.push_back({"gc", name, -1, 0, 0, 0, st.and_gates, st.garbled_bytes * count, st.online_label_bytes * count,
                    seconds_since(t0) * 1000.0});
    (void)g;
  }
}

int cmd_bench(const ConfigFlags& flags, const std::vector<std::string>& suites, const std::string& out) {
  const RunConfig cfg = flags.resolve();
  std::vector<BenchRow> rows;
  for (const auto& s : suites) {
    if (s == "tiny") bench_tiny(cfg, rows);
    else if (s == "sparsity") bench_sparsity(cfg, rows);
    else if (s == "gc") bench_gc(cfg, rows);
    else throw ParameterError("unknown bench suite '" + s + "' (expected tiny, sparsity or gc)");
  }
  std::string csv = "suite,name,stage,pmult,autom,add,and_gates,offline_bytes,online_bytes,wall_ms_informational\n";
  std::printf("%-9s %-18s %5s %7s %7s %7s %9s %14s %14s %12s\n", "suite", "name", "stage", "pmult", "autom", "add", "and_gates",
              "offline", "online", "wall_ms*");
  for (const auto& r : rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%s,%s,%d,%llu,%llu,%llu,%llu,%zu,%zu,%.1f\n", r.suite.c_str(),
                  r.name.c_str(), r.stage, static_cast<unsigned long long>(r.pmult),
                  static_cast<unsigned long long>(r.autom), static_cast<unsigned long long>(r.add),
                  static_cast<unsigned long long>(r.and_gates), r.offline, r.online, r.wall_ms);
    csv += line;
    std::printf("%-9s %-18s %5d %7llu %7llu %7llu %9llu %14zu %14zu %12.1f\n", r.suite.c_str(), r.name.c_str(),
                r.stage, static_cast<unsigned long long>(r.pmult), static_cast<unsigned long long>(r.autom),
                static_cast<unsigned long long>(r.add), static_cast<unsigned long long>(r.and_gates), r.offline, r.online, r.wall_ms);
  }
  std::printf("* wall-clock times are informational only\n");
  if (!out.empty()) write_text(out, csv);
  return 0;
}

}  // namespace
}  // namespace trident::tools

int main(int argc, char** argv) {
  using namespace trident::tools;
  CLI::App app{"trident: three-party private CNN inference (client, cloud, proxy)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "trident 1.0.0");

  ConfigFlags kg_flags, sim_flags, role_flags, bench_flags, noise_flags, gcs_flags;

  std::string kg_out, kg_model, kg_report;
  auto* keygen = app.add_subcommand("keygen", "generate client keys and print key-set footprints");
  kg_flags.add(keygen);
  keygen->add_option("--out-dir", kg_out, "directory for key files")->required();
  keygen->add_option("--model", kg_model, "model whose rotations the all-keys set must cover");
  keygen->add_option("--report", kg_report, "write a JSON report");

  std::string sim_model, sim_input, sim_transport = "sim", sim_fault, sim_logits, sim_csv, sim_ops, sim_report;
  std::size_t sim_random = 1, sim_limit = 0;
  std::int64_t sim_input_max = 16, role_input_max = 16;
  bool sim_check = false;
  auto* sim = app.add_subcommand("sim", "run all three roles in one process");
  sim_flags.add(sim);
  sim->add_option("--model", sim_model, "model file")->required();
  sim->add_option("--input", sim_input, "input tensors (calibration file); random inputs when absent");
  sim->add_option("--random", sim_random, "number of random inputs when --input is absent");
  sim->add_option("--input-max", sim_input_max, "random inputs drawn from [0, max)");
  sim->add_option("--limit", sim_limit, "use at most this many inputs");
  sim->add_option("--transport", sim_transport, "sim (in-process scheduler) or tcp (local sockets)");
  sim->add_flag("--check", sim_check, "compare logits with the plaintext reference band");
  sim->add_option("--inject-fault", sim_fault, "testing aid: gc-table, noise or drop-keys");
  sim->add_option("--logits-out", sim_logits, "write logits as JSON");
  sim->add_option("--transcript-csv", sim_csv, "write the bandwidth report as CSV");
  sim->add_option("--ops-csv", sim_ops, "write the op-count report as CSV");
  sim->add_option("--report", sim_report, "write a JSON report");

  std::string role_name, role_model, role_input, role_listen, role_logits;
  std::vector<std::string> role_peers;
  std::size_t role_random = 1, role_limit = 0;
  auto* role = app.add_subcommand("role", "host one role over TCP");
  role_flags.add(role);
  role->add_option("role", role_name, "client, cloud or proxy")->required();
  role->add_option("--model", role_model, "model file")->required();
  role->add_option("--input", role_input, "client inputs (calibration file)");
  role->add_option("--random", role_random, "client: number of random inputs when --input is absent");
  role->add_option("--input-max", role_input_max, "client: random inputs drawn from [0, max)");
  role->add_option("--limit", role_limit, "client: use at most this many inputs");
  role->add_option("--listen", role_listen, "host:port to accept peers on");
  role->add_option("--peer,--connect", role_peers, "role=host:port of a peer (repeatable)");
  role->add_option("--logits-out", role_logits, "client: write logits as JSON");

  std::vector<std::string> bench_suites = {"tiny", "sparsity", "gc"};
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "emit op counts and bytes as CSV rows");
  bench_flags.add(bench, true);
  bench->add_option("--suite", bench_suites, "tiny, sparsity, gc (repeatable)");
  bench->add_option("--out", bench_out, "CSV output path");

  std::string noise_model, noise_report_path;
  auto* noise = app.add_subcommand("noise-report", "per-layer analytic noise and remaining budget");
  noise_flags.add(noise);
  noise->add_option("--model", noise_model, "model file")->required();
  noise->add_option("--report", noise_report_path, "write a JSON report");

  std::size_t gcs_count = 10000;
  std::string gcs_report;
  auto* gcs = app.add_subcommand("gc-stats", "garbled circuit sizes for both GC modes");
  gcs_flags.add(gcs, true);
  gcs->add_option("--count", gcs_count, "number of activation instances");
  gcs->add_option("--report", gcs_report, "write a JSON report");

  int gm_depth = 2, gm_width = 8, gm_channels = 4, gm_classes = 10, gm_shift = 4;
  std::int64_t gm_weight_bound = 7, gm_input_max = 16;
  double gm_alpha = 0.5;
  std::uint64_t gm_seed = 1;
  std::size_t gm_count = 100;
  std::string gm_preset = "toy", gm_out, gm_inputs;
  auto* gen = app.add_subcommand("gen-model", "random sparse tiny CNN with a certified value bound");
  gen->add_option("--depth", gm_depth, "2 or 4");
  gen->add_option("--width", gm_width, "input width");
  gen->add_option("--channels", gm_channels, "conv output channels");
  gen->add_option("--classes", gm_classes, "logits");
  gen->add_option("--shift", gm_shift, "truncated LSBs per activation");
  gen->add_option("--alpha", gm_alpha, "kernel element sparsity");
  gen->add_option("--weight-bound", gm_weight_bound, "weights drawn from [-bound, bound]");
  gen->add_option("--input-max", gm_input_max, "calibration inputs drawn from [0, max)");
  gen->add_option("--seed", gm_seed, "weight and input seed");
  gen->add_option("--preset", gm_preset, "toy or paper");
  gen->add_option("--out", gm_out, "model file")->required();
  gen->add_option("--inputs-out", gm_inputs, "write the calibration inputs");
  gen->add_option("--count", gm_count, "calibration inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (keygen->parsed()) return cmd_keygen(kg_flags, kg_out, kg_model, kg_report);
    if (sim->parsed()) {
      return cmd_sim(sim_flags, sim_model, sim_input, sim_random, sim_input_max, sim_limit, sim_transport, sim_fault, sim_check,
                     sim_logits, sim_csv, sim_ops, sim_report);
    }
    if (role->parsed()) {
      return cmd_role(role_flags, role_name, role_model, role_input, role_random, role_input_max, role_limit, role_listen,
                      role_peers, role_logits);
    }
    if (bench->parsed()) return cmd_bench(bench_flags, bench_suites, bench_out);
    if (noise->parsed()) return cmd_noise_report(noise_flags, noise_model, noise_report_path);
    if (gcs->parsed()) return cmd_gc_stats(gcs_flags, gcs_count, gcs_report);
    if (gen->parsed()) {
      return cmd_gen_model(gm_depth, gm_width, gm_channels, gm_classes, gm_shift, gm_alpha, gm_weight_bound,
                           gm_input_max, gm_seed, gm_preset, gm_out, gm_inputs, gm_count);
    }
  } catch (const trident::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
