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

#ifndef TRIDENT_GC_CIRCUIT_HPP_
#define TRIDENT_GC_CIRCUIT_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "trident/common/bytes.hpp"

namespace trident::gc {

enum class GateKind : std::uint8_t { kXor = 0, kAnd = 1, kInv = 2 };

struct Gate {
  GateKind kind = GateKind::kXor;
  std::uint32_t a = 0;
  std::uint32_t b = 0;  // unused for kInv
  std::uint32_t out = 0;
};

// Gate list in topological order. Inputs are wires 0..k-1, garbler inputs
// first; every gate output is a fresh wire.
struct Circuit {
  std::uint32_t num_wires = 0;
  std::vector<Gate> gates;
  std::vector<std::uint32_t> garbler_inputs;
  std::vector<std::uint32_t> evaluator_inputs;
  std::vector<std::uint32_t> outputs;

  std::size_t and_count() const;
  std::size_t xor_count() const;  // XOR and NOT gates, both free

  // Bits are 0/1 bytes.
  std::vector<std::uint8_t> evaluate(std::span<const std::uint8_t> garbler_bits,
                                     std::span<const std::uint8_t> evaluator_bits) const;

  Bytes serialize() const;
  static Circuit deserialize(ByteReader& in);
  std::array<std::uint8_t, 32> hash() const;
};

// A wire or a known constant; constants fold away at build time.
class Bit {
 public:
  static Bit constant(bool v) { return Bit(v ? kOne : kZero, 0); }
  static Bit wire(std::uint32_t id) { return Bit(kWire, id); }

  bool is_const() const { return kind_ != kWire; }
  bool value() const { return kind_ == kOne; }
  std::uint32_t id() const { return id_; }
  friend bool operator==(const Bit&, const Bit&) = default;

 private:
  enum Kind : std::uint8_t { kZero, kOne, kWire };
  Bit(Kind k, std::uint32_t id) : kind_(k), id_(id) {}
  Kind kind_;
  std::uint32_t id_;
};

using Word = std::vector<Bit>;  // least significant bit first

class CircuitBuilder {
 public:
  // All inputs must be declared before the first gate.
  Word garbler_input(int width);
  Word evaluator_input(int width);

  Bit XOR(Bit a, Bit b);
  Bit AND(Bit a, Bit b);
  Bit NOT(Bit a);
  Bit OR(Bit a, Bit b);
  // sel ? if1 : if0, one AND.
  Bit MUX(Bit sel, Bit if1, Bit if0);

  void output(Bit b);
  void output(const Word& w);

  Circuit finish();

 private:
  std::uint32_t emit(GateKind k, std::uint32_t a, std::uint32_t b);
  std::uint32_t materialize(Bit b);

  Circuit c_;
  bool gates_started_ = false;
};

// Word arithmetic over CircuitBuilder. Ripple-carry: one AND per bit.
Word constant_word(std::uint64_t value, int width);
Word resize(const Word& w, int width, bool sign_extend);
// (a + b + carry_in) mod 2^width; if carry_out is given it receives the carry.
Word add(CircuitBuilder& cb, const Word& a, const Word& b, int width, Bit carry_in = Bit::constant(false),
         Bit* carry_out = nullptr);
// a - b mod 2^width; *no_borrow is 1 iff a >= b as unsigned width-bit values.
Word sub(CircuitBuilder& cb, const Word& a, const Word& b, int width, Bit* no_borrow = nullptr);
Word mux(CircuitBuilder& cb, Bit sel, const Word& if1, const Word& if0);
Word and_all(CircuitBuilder& cb, const Word& w, Bit b);
// 1 iff a < b as signed two's-complement values of equal width.
Bit less_signed(CircuitBuilder& cb, const Word& a, const Word& b);

// Little-endian bit helpers.
std::vector<std::uint8_t> to_bits(std::uint64_t v, int width);
std::uint64_t from_bits(std::span<const std::uint8_t> bits);

}  // namespace trident::gc

#endif  // TRIDENT_GC_CIRCUIT_HPP_
