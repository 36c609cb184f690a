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

#include "trident/gc/circuit.hpp"

#include <sodium.h>

#include <string>

#include "trident/common/error.hpp"

namespace trident::gc {

std::size_t Circuit::and_count() const {
  std::size_t n = 0;
  for (const auto& g : gates) n += g.kind == GateKind::kAnd;
  return n;
}

std::size_t Circuit::xor_count() const { return gates.size() - and_count(); }

std::vector<std::uint8_t> Circuit::evaluate(std::span<const std::uint8_t> garbler_bits,
                                            std::span<const std::uint8_t> evaluator_bits) const {
  if (garbler_bits.size() != garbler_inputs.size() ||
      evaluator_bits.size() != evaluator_inputs.size()) {
    throw ParameterError("circuit: input width mismatch");
  }
  std::vector<std::uint8_t> w(num_wires, 0);
  for (std::size_t i = 0; i < garbler_bits.size(); ++i) w[garbler_inputs[i]] = garbler_bits[i] & 1;
  for (std::size_t i = 0; i < evaluator_bits.size(); ++i) {
    w[evaluator_inputs[i]] = evaluator_bits[i] & 1;
  }
  for (const auto& g : gates) {
    switch (g.kind) {
      case GateKind::kXor:
        w[g.out] = w[g.a] ^ w[g.b];
        break;
      case GateKind::kAnd:
        w[g.out] = w[g.a] & w[g.b];
        break;
      case GateKind::kInv:
        w[g.out] = w[g.a] ^ 1;
        break;
    }
  }
  std::vector<std::uint8_t> out;
  out.reserve(outputs.size());
  for (auto o : outputs) out.push_back(w[o]);
  return out;
}

Bytes Circuit::serialize() const {
  ByteWriter w;
  w.u32(num_wires);
  auto ids = [&](const std::vector<std::uint32_t>& v) {
    w.u32(static_cast<std::uint32_t>(v.size()));
    for (auto x : v) w.u32(x);
  };
  ids(garbler_inputs);
  ids(evaluator_inputs);
  ids(outputs);
  w.u32(static_cast<std::uint32_t>(gates.size()));
  for (const auto& g : gates) {
    w.u8(static_cast<std::uint8_t>(g.kind));
    w.u32(g.a);
    w.u32(g.b);
    w.u32(g.out);
  }
  return w.take();
}

Circuit Circuit::deserialize(ByteReader& in) {
  Circuit c;
  c.num_wires = in.u32();
  auto ids = [&](std::vector<std::uint32_t>& v) {
    const auto n = in.u32();
    if (n > in.remaining() / 4) throw IntegrityError("circuit: truncated wire list");
    for (std::uint32_t i = 0; i < n; ++i) {
      v.push_back(in.u32());
      if (v.back() >= c.num_wires) throw IntegrityError("circuit: wire out of range");
    }
  };
  ids(c.garbler_inputs);
  ids(c.evaluator_inputs);
  ids(c.outputs);
  const std::size_t n_in = c.garbler_inputs.size() + c.evaluator_inputs.size();
  for (std::size_t i = 0; i < n_in; ++i) {
    const auto id = i < c.garbler_inputs.size() ? c.garbler_inputs[i]
                                                : c.evaluator_inputs[i - c.garbler_inputs.size()];
    if (id != i) throw IntegrityError("circuit: input wires must come first, in order");
  }
  const auto ng = in.u32();
  if (ng > in.remaining() / 13) throw IntegrityError("circuit: truncated gate list");
  for (std::uint32_t i = 0; i < ng; ++i) {
    Gate g;
    const auto k = in.u8();
    if (k > 2) throw IntegrityError("circuit: unknown gate kind");
    g.kind = static_cast<GateKind>(k);
    g.a = in.u32();
    g.b = in.u32();
    g.out = in.u32();
    if (g.out != n_in + i || g.a >= g.out || (g.kind != GateKind::kInv && g.b >= g.out) ||
        g.out >= c.num_wires) {
      throw IntegrityError("circuit: gate order is not topological");
    }
    c.gates.push_back(g);
  }
  return c;
}

std::array<std::uint8_t, 32> Circuit::hash() const {
  const Bytes b = serialize();
  std::array<std::uint8_t, 32> h{};
  crypto_generichash(h.data(), h.size(), b.data(), b.size(), nullptr, 0);
  return h;
}

Word CircuitBuilder::garbler_input(int width) {
  if (gates_started_) throw ParameterError("circuit: inputs must precede gates");
  if (!c_.evaluator_inputs.empty()) throw ParameterError("circuit: garbler inputs come first");
  Word w;
  for (int i = 0; i < width; ++i) {
    c_.garbler_inputs.push_back(c_.num_wires);
    w.push_back(Bit::wire(c_.num_wires++));
  }
  return w;
}

Word CircuitBuilder::evaluator_input(int width) {
  if (gates_started_) throw ParameterError("circuit: inputs must precede gates");
  Word w;
  for (int i = 0; i < width; ++i) {
    c_.evaluator_inputs.push_back(c_.num_wires);
    w.push_back(Bit::wire(c_.num_wires++));
  }
  return w;
}

std::uint32_t CircuitBuilder::emit(GateKind k, std::uint32_t a, std::uint32_t b) {
  gates_started_ = true;
  const std::uint32_t out = c_.num_wires++;
  c_.gates.push_back({k, a, b, out});
  return out;
}

Bit CircuitBuilder::XOR(Bit a, Bit b) {
  if (a.is_const() && b.is_const()) return Bit::constant(a.value() != b.value());
  if (a.is_const()) std::swap(a, b);
  if (b.is_const()) return b.value() ? NOT(a) : a;
  if (a == b) return Bit::constant(false);
  return Bit::wire(emit(GateKind::kXor, a.id(), b.id()));
}

Bit CircuitBuilder::AND(Bit a, Bit b) {
  if (a.is_const()) std::swap(a, b);
  if (b.is_const()) return b.value() ? a : Bit::constant(false);
  if (a == b) return a;
  return Bit::wire(emit(GateKind::kAnd, a.id(), b.id()));
}

Bit CircuitBuilder::NOT(Bit a) {
  if (a.is_const()) return Bit::constant(!a.value());
  return Bit::wire(emit(GateKind::kInv, a.id(), 0));
}

Bit CircuitBuilder::OR(Bit a, Bit b) { return XOR(XOR(a, b), AND(a, b)); }

Bit CircuitBuilder::MUX(Bit sel, Bit if1, Bit if0) {
  return XOR(if0, AND(sel, XOR(if1, if0)));
}

std::uint32_t CircuitBuilder::materialize(Bit b) {
  if (!b.is_const()) return b.id();
  if (c_.num_wires == 0) throw ParameterError("circuit: constant output without any input wire");
  // x XOR x is a zero wire whatever x carries.
  const std::uint32_t zero = emit(GateKind::kXor, 0, 0);
  return b.value() ? emit(GateKind::kInv, zero, 0) : zero;
}

void CircuitBuilder::output(Bit b) { c_.outputs.push_back(materialize(b)); }

void CircuitBuilder::output(const Word& w) {
  for (const auto& b : w) output(b);
}

Circuit CircuitBuilder::finish() {
  Circuit out = std::move(c_);
  c_ = Circuit{};
  gates_started_ = false;
  return out;
}

Word constant_word(std::uint64_t value, int width) {
  Word w;
  for (int i = 0; i < width; ++i) w.push_back(Bit::constant(i < 64 && ((value >> i) & 1)));
  return w;
}

Word resize(const Word& w, int width, bool sign_extend) {
  Word out(w.begin(), w.begin() + std::min<std::size_t>(w.size(), width));
  const Bit fill = sign_extend && !w.empty() ? w.back() : Bit::constant(false);
  while (static_cast<int>(out.size()) < width) out.push_back(fill);
  return out;
}

Word add(CircuitBuilder& cb, const Word& a, const Word& b, int width, Bit carry_in, Bit* carry_out) {
  const Word x = resize(a, width, false), y = resize(b, width, false);
  Word s;
  Bit c = carry_in;
  for (int i = 0; i < width; ++i) {
    const Bit axc = cb.XOR(x[i], c);
    s.push_back(cb.XOR(axc, y[i]));
    if (i + 1 < width || carry_out) {
      // c' = c ^ ((a ^ c) & (b ^ c))
      c = cb.XOR(c, cb.AND(axc, cb.XOR(y[i], c)));
    }
  }
  if (carry_out) *carry_out = c;
  return s;
}

Word sub(CircuitBuilder& cb, const Word& a, const Word& b, int width, Bit* no_borrow) {
  Word nb;
  for (const auto& bit : resize(b, width, false)) nb.push_back(cb.NOT(bit));
  return add(cb, a, nb, width, Bit::constant(true), no_borrow);
}

Word mux(CircuitBuilder& cb, Bit sel, const Word& if1, const Word& if0) {
  if (if1.size() != if0.size()) throw ParameterError("mux: width mismatch");
  Word out;
  for (std::size_t i = 0; i < if1.size(); ++i) out.push_back(cb.MUX(sel, if1[i], if0[i]));
  return out;
}

Word and_all(CircuitBuilder& cb, const Word& w, Bit b) {
  Word out;
  for (const auto& x : w) out.push_back(cb.AND(x, b));
  return out;
}

Bit less_signed(CircuitBuilder& cb, const Word& a, const Word& b) {
  const int w = static_cast<int>(a.size()) + 1;
  const Word d = sub(cb, resize(a, w, true), resize(b, w, true), w);
  return d.back();
}

std::vector<std::uint8_t> to_bits(std::uint64_t v, int width) {
  std::vector<std::uint8_t> out(width);
  for (int i = 0; i < width; ++i) out[i] = i < 64 ? (v >> i) & 1 : 0;
  return out;
}

std::uint64_t from_bits(std::span<const std::uint8_t> bits) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size() && i < 64; ++i) v |= static_cast<std::uint64_t>(bits[i] & 1) << i;
  return v;
}

}  // namespace trident::gc
