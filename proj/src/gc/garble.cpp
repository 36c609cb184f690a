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

#include "trident/gc/garble.hpp"

#include <sodium.h>

#include <cstring>

#include "trident/common/error.hpp"

namespace trident::gc {

namespace {

constexpr std::uint32_t kMagic = 0x31434754;  // "TGC1"
constexpr std::uint8_t kVersion = 1;

Block row_pad(const Block& a, const Block& b, std::uint64_t gid) {
  std::uint8_t in[40];
  std::memcpy(in, &a.lo, 8);
  std::memcpy(in + 8, &a.hi, 8);
  std::memcpy(in + 16, &b.lo, 8);
  std::memcpy(in + 24, &b.hi, 8);
  std::memcpy(in + 32, &gid, 8);
  Block out;
  std::uint8_t h[16];
  crypto_generichash(h, sizeof h, in, sizeof in, nullptr, 0);
  std::memcpy(&out.lo, h, 8);
  std::memcpy(&out.hi, h + 8, 8);
  return out;
}

std::uint64_t output_tag(const Block& l, std::uint64_t id) {
  std::uint8_t in[25];
  in[0] = 'o';
  std::memcpy(in + 1, &l.lo, 8);
  std::memcpy(in + 9, &l.hi, 8);
  std::memcpy(in + 17, &id, 8);
  std::uint64_t out = 0;
  std::uint8_t h[8];
  crypto_generichash(h, sizeof h, in, sizeof in, nullptr, 0);
  std::memcpy(&out, h, 8);
  return out;
}

std::array<std::uint8_t, 32> digest(std::span<const std::uint8_t> body) {
  std::array<std::uint8_t, 32> d{};
  crypto_generichash(d.data(), d.size(), body.data(), body.size(), nullptr, 0);
  return d;
}

void write_cfg(ByteWriter& w, const GcConfig& c) {
  w.u8(static_cast<std::uint8_t>(c.mode));
  w.u64(c.t);
  w.u8(static_cast<std::uint8_t>(c.t_bits));
  w.u8(static_cast<std::uint8_t>(c.f));
  w.u8(static_cast<std::uint8_t>(c.b));
  w.u8(static_cast<std::uint8_t>(c.out_bits));
  w.u32(static_cast<std::uint32_t>(c.label_bits));
}

GcConfig read_cfg(ByteReader& r) {
  GcConfig c;
  const auto m = r.u8();
  if (m > 1) throw IntegrityError("garbled circuit: unknown mode");
  c.mode = static_cast<GcMode>(m);
  c.t = r.u64();
  c.t_bits = r.u8();
  c.f = r.u8();
  c.b = r.u8();
  c.out_bits = r.u8();
  c.label_bits = static_cast<int>(r.u32());
  try {
    c.validate();
  } catch (const ParameterError& e) {
    throw IntegrityError(std::string("garbled circuit header: ") + e.what());
  }
  return c;
}

}  // namespace

Seed random_seed() {
  Seed s;
  randombytes_buf(s.data(), s.size());
  return s;
}

Block GarblerSecrets::label(std::uint32_t instance, std::uint32_t input, bool bit) const {
  const Block z = zero_labels.at(std::size_t{instance} * inputs_per_instance + input);
  return bit ? z ^ delta : z;
}

Garbling garble(const Circuit& c, const GcConfig& cfg, std::uint32_t instances, const Seed& seed) {
  if (instances == 0) throw ParameterError("garble: need at least one instance");
  const std::uint32_t n_in =
      static_cast<std::uint32_t>(c.garbler_inputs.size() + c.evaluator_inputs.size());
  const std::size_t n_and = c.and_count();

  Garbling out;
  GarbledCircuit& g = out.garbled;
  GarblerSecrets& s = out.secrets;
  g.circuit_hash = c.hash();
  g.cfg = cfg;
  g.instances = instances;
  g.and_gates = static_cast<std::uint32_t>(n_and);
  g.num_outputs = static_cast<std::uint32_t>(c.outputs.size());
  s.inputs_per_instance = n_in;

  // Randomness: delta, batch id, then input labels, all from one seeded stream.
  const std::size_t words = 2 + 1 + 2 * std::size_t{n_in} * instances;
  std::vector<std::uint64_t> rnd(words);
  randombytes_buf_deterministic(rnd.data(), rnd.size() * 8, seed.data());
  s.delta = {rnd[0] | 1, rnd[1]};
  g.batch_id = rnd[2];
  s.zero_labels.resize(std::size_t{n_in} * instances);
  for (std::size_t i = 0; i < s.zero_labels.size(); ++i) {
    s.zero_labels[i] = {rnd[3 + 2 * i], rnd[4 + 2 * i]};
  }

  g.tables.reserve(4 * n_and * instances);
  g.decode_bits.reserve(c.outputs.size() * instances);
  g.output_tags.reserve(2 * c.outputs.size() * instances);
  std::vector<Block> w0(c.num_wires);
  for (std::uint32_t inst = 0; inst < instances; ++inst) {
    std::uint32_t k = 0;
    for (auto id : c.garbler_inputs) w0[id] = s.label(inst, k++, false);
    for (auto id : c.evaluator_inputs) w0[id] = s.label(inst, k++, false);
    const std::uint64_t base = std::uint64_t{inst} * c.gates.size();
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
      const Gate& gate = c.gates[gi];
      switch (gate.kind) {
        case GateKind::kXor:
          w0[gate.out] = w0[gate.a] ^ w0[gate.b];
          break;
        case GateKind::kInv:
          w0[gate.out] = w0[gate.a] ^ s.delta;
          break;
        case GateKind::kAnd: {
          const std::uint64_t gid = base + gi;
          // Fresh output label from the garbler's own pad stream.
          Block out0 = row_pad(s.delta, w0[gate.a] ^ w0[gate.b], ~gid);
          w0[gate.out] = out0;
          Block rows[4];
          for (int va = 0; va < 2; ++va) {
            for (int vb = 0; vb < 2; ++vb) {
              const Block la = va ? w0[gate.a] ^ s.delta : w0[gate.a];
              const Block lb = vb ? w0[gate.b] ^ s.delta : w0[gate.b];
              const Block lo = (va & vb) ? out0 ^ s.delta : out0;
              rows[2 * la.lsb() + lb.lsb()] = row_pad(la, lb, gid) ^ lo;
            }
          }
          g.tables.insert(g.tables.end(), rows, rows + 4);
          break;
        }
      }
    }
    for (std::size_t o = 0; o < c.outputs.size(); ++o) {
      const Block l0 = w0[c.outputs[o]];
      const std::uint64_t id = std::uint64_t{inst} * c.outputs.size() + o;
      g.decode_bits.push_back(l0.lsb());
      g.output_tags.push_back(output_tag(l0, id));
      g.output_tags.push_back(output_tag(l0 ^ s.delta, id));
    }
  }
  return out;
}

void attach_garbler_inputs(const Circuit& c, Garbling& g, std::span<const std::uint8_t> bits) {
  const std::size_t per = c.garbler_inputs.size();
  if (bits.size() != per * g.garbled.instances) {
    throw ParameterError("garble: garbler input width mismatch");
  }
  g.garbled.garbler_labels.clear();
  for (std::uint32_t inst = 0; inst < g.garbled.instances; ++inst) {
    for (std::size_t i = 0; i < per; ++i) {
      g.garbled.garbler_labels.push_back(
          g.secrets.label(inst, static_cast<std::uint32_t>(i), bits[inst * per + i] & 1));
    }
  }
}

std::array<Block, 2> evaluator_label_pair(const Circuit& c, const GarblerSecrets& s,
                                          std::uint32_t instance, std::uint32_t i) {
  const auto k = static_cast<std::uint32_t>(c.garbler_inputs.size()) + i;
  return {s.label(instance, k, false), s.label(instance, k, true)};
}

std::vector<std::array<Block, 2>> evaluator_label_pairs(const Circuit& c, const GarblerSecrets& s) {
  const auto per = static_cast<std::uint32_t>(c.evaluator_inputs.size());
  const auto instances = static_cast<std::uint32_t>(s.zero_labels.size() / s.inputs_per_instance);
  std::vector<std::array<Block, 2>> out;
  out.reserve(std::size_t{per} * instances);
  for (std::uint32_t inst = 0; inst < instances; ++inst) {
    for (std::uint32_t i = 0; i < per; ++i) out.push_back(evaluator_label_pair(c, s, inst, i));
  }
  return out;
}

std::vector<Block> evaluate(const Circuit& c, const GarbledCircuit& g, std::uint32_t instance,
                            std::span<const Block> garbler_labels,
                            std::span<const Block> evaluator_labels) {
  if (g.circuit_hash != c.hash()) throw IntegrityError("garbled circuit: circuit hash mismatch");
  if (instance >= g.instances) throw ParameterError("garbled circuit: instance out of range");
  if (garbler_labels.size() != c.garbler_inputs.size() ||
      evaluator_labels.size() != c.evaluator_inputs.size()) {
    throw ParameterError("garbled circuit: input label count mismatch");
  }
  std::vector<Block> w(c.num_wires);
  for (std::size_t i = 0; i < garbler_labels.size(); ++i) w[c.garbler_inputs[i]] = garbler_labels[i];
  for (std::size_t i = 0; i < evaluator_labels.size(); ++i) {
    w[c.evaluator_inputs[i]] = evaluator_labels[i];
  }
  const std::uint64_t base = std::uint64_t{instance} * c.gates.size();
  std::size_t row = std::size_t{4} * g.and_gates * instance;
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const Gate& gate = c.gates[gi];
    switch (gate.kind) {
      case GateKind::kXor:
        w[gate.out] = w[gate.a] ^ w[gate.b];
        break;
      case GateKind::kInv:
        w[gate.out] = w[gate.a];
        break;
      case GateKind::kAnd: {
        const Block& la = w[gate.a];
        const Block& lb = w[gate.b];
        w[gate.out] = g.tables[row + 2 * la.lsb() + lb.lsb()] ^ row_pad(la, lb, base + gi);
        row += 4;
        break;
      }
    }
  }
  std::vector<Block> out;
  out.reserve(c.outputs.size());
  for (auto o : c.outputs) out.push_back(w[o]);
  return out;
}

std::vector<std::uint8_t> decode(const GarbledCircuit& g, std::uint32_t instance,
                                 std::span<const Block> output_labels) {
  if (output_labels.size() != g.num_outputs) throw ParameterError("decode: output count mismatch");
  std::vector<std::uint8_t> bits;
  bits.reserve(output_labels.size());
  for (std::size_t o = 0; o < output_labels.size(); ++o) {
    const std::uint64_t id = std::uint64_t{instance} * g.num_outputs + o;
    const std::uint8_t bit = output_labels[o].lsb() ^ g.decode_bits[id];
    if (output_tag(output_labels[o], id) != g.output_tags[2 * id + bit]) {
      throw IntegrityError("garbled circuit: output label failed authentication");
    }
    bits.push_back(bit);
  }
  return bits;
}

std::vector<std::uint8_t> evaluate_all(const Circuit& c, const GarbledCircuit& g,
                                       std::span<const Block> evaluator_labels) {
  const std::size_t pg = c.garbler_inputs.size();
  const std::size_t pe = c.evaluator_inputs.size();
  if (g.garbler_labels.size() != pg * g.instances || evaluator_labels.size() != pe * g.instances) {
    throw ParameterError("garbled circuit: label count mismatch");
  }
  std::vector<std::uint8_t> out;
  out.reserve(std::size_t{g.num_outputs} * g.instances);
  for (std::uint32_t inst = 0; inst < g.instances; ++inst) {
    const auto labels = evaluate(c, g, inst, std::span(g.garbler_labels).subspan(inst * pg, pg),
                                 evaluator_labels.subspan(inst * pe, pe));
    const auto bits = decode(g, inst, labels);
    out.insert(out.end(), bits.begin(), bits.end());
  }
  return out;
}

Bytes GarbledCircuit::serialize() const {
  ByteWriter body;
  body.bytes(circuit_hash);
  write_cfg(body, cfg);
  body.u64(batch_id);
  body.u32(instances);
  body.u32(and_gates);
  body.u32(num_outputs);
  body.u64(tables.size());
  for (const auto& b : tables) b.write(body);
  body.bytes(decode_bits);
  for (auto t : output_tags) body.u64(t);
  body.u64(garbler_labels.size());
  for (const auto& b : garbler_labels) b.write(body);

  ByteWriter w;
  w.u32(kMagic);
  w.u8(kVersion);
  w.bytes(digest(body.view()));
  w.blob(body.view());
  return w.take();
}

GarbledCircuit GarbledCircuit::deserialize(ByteReader& in) {
  if (in.u32() != kMagic) throw IntegrityError("garbled circuit: bad magic");
  if (in.u8() != kVersion) throw IntegrityError("garbled circuit: unsupported version");
  std::array<std::uint8_t, 32> want{};
  const auto d = in.bytes(32);
  std::copy(d.begin(), d.end(), want.begin());
  const auto body = in.blob();
  if (digest(body) != want) throw IntegrityError("garbled circuit: digest mismatch");

  ByteReader r(body);
  GarbledCircuit g;
  const auto h = r.bytes(32);
  std::copy(h.begin(), h.end(), g.circuit_hash.begin());
  g.cfg = read_cfg(r);
  g.batch_id = r.u64();
  g.instances = r.u32();
  g.and_gates = r.u32();
  g.num_outputs = r.u32();
  const auto nt = r.u64();
  if (nt != std::uint64_t{4} * g.and_gates * g.instances || nt > r.remaining() / kLabelBytes) {
    throw IntegrityError("garbled circuit: table size mismatch");
  }
  g.tables.resize(nt);
  for (auto& b : g.tables) b = Block::read(r);
  const std::size_t no = std::size_t{g.num_outputs} * g.instances;
  if (no > r.remaining()) throw IntegrityError("garbled circuit: truncated outputs");
  const auto db = r.bytes(no);
  g.decode_bits.assign(db.begin(), db.end());
  g.output_tags.resize(2 * no);
  for (auto& t : g.output_tags) t = r.u64();
  const auto nl = r.u64();
  if (nl > r.remaining() / kLabelBytes) throw IntegrityError("garbled circuit: truncated labels");
  g.garbler_labels.resize(nl);
  for (auto& b : g.garbler_labels) b = Block::read(r);
  r.expect_done("garbled circuit");
  return g;
}

}  // namespace trident::gc
