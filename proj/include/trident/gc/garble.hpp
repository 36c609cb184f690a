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

#ifndef TRIDENT_GC_GARBLE_HPP_
#define TRIDENT_GC_GARBLE_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "trident/common/bytes.hpp"
#include "trident/gc/activations.hpp"
#include "trident/gc/circuit.hpp"

namespace trident::gc {

inline constexpr std::size_t kLabelBytes = 16;

struct Block {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  bool lsb() const { return lo & 1; }
  Block operator^(const Block& o) const { return {lo ^ o.lo, hi ^ o.hi}; }
  friend bool operator==(const Block&, const Block&) = default;

  void write(ByteWriter& w) const {
    w.u64(lo);
    w.u64(hi);
  }
  static Block read(ByteReader& r) {
    Block b;
    b.lo = r.u64();
    b.hi = r.u64();
    return b;
  }
};

using Seed = std::array<std::uint8_t, 32>;
Seed random_seed();

// Garbler-only state: the free-XOR offset and the zero label of every input
// wire, per instance.
struct GarblerSecrets {
  Block delta;
  std::uint32_t inputs_per_instance = 0;
  std::vector<Block> zero_labels;  // [instance][garbler inputs, evaluator inputs]

  Block label(std::uint32_t instance, std::uint32_t input, bool bit) const;
};

// What the evaluator receives: tables for every instance, output decoding
// data, and the garbler's active input labels once attached.
struct GarbledCircuit {
  std::array<std::uint8_t, 32> circuit_hash{};
  GcConfig cfg;
  std::uint64_t batch_id = 0;
  std::uint32_t instances = 0;
  std::uint32_t and_gates = 0;   // per instance
  std::uint32_t num_outputs = 0;  // per instance
  std::vector<Block> tables;      // 4 rows per AND gate per instance
  std::vector<std::uint8_t> decode_bits;   // permute bit of each output label 0
  std::vector<std::uint64_t> output_tags;  // 2 per output wire
  std::vector<Block> garbler_labels;       // active labels, [instance][garbler input]

  std::size_t table_bytes() const { return tables.size() * kLabelBytes; }

  // Versioned wire format; a digest over the body is checked on read.
  Bytes serialize() const;
  static GarbledCircuit deserialize(ByteReader& in);
};

struct Garbling {
  GarbledCircuit garbled;
  GarblerSecrets secrets;
};

Garbling garble(const Circuit& c, const GcConfig& cfg, std::uint32_t instances, const Seed& seed);

// Attaches active garbler labels for `bits` (all instances concatenated).
void attach_garbler_inputs(const Circuit& c, Garbling& g, std::span<const std::uint8_t> bits);

// Both labels of evaluator input `i` of `instance`, for label delivery.
std::array<Block, 2> evaluator_label_pair(const Circuit& c, const GarblerSecrets& s,
                                          std::uint32_t instance, std::uint32_t i);
std::vector<std::array<Block, 2>> evaluator_label_pairs(const Circuit& c, const GarblerSecrets& s);

// Output labels of one instance. Throws IntegrityError on a label that
// decodes to neither value.
std::vector<Block> evaluate(const Circuit& c, const GarbledCircuit& g, std::uint32_t instance,
                            std::span<const Block> garbler_labels,
                            std::span<const Block> evaluator_labels);
std::vector<std::uint8_t> decode(const GarbledCircuit& g, std::uint32_t instance,
                                 std::span<const Block> output_labels);

// Evaluates every instance with the attached garbler labels and the given
// evaluator labels ([instance][evaluator input]); returns decoded bits.
std::vector<std::uint8_t> evaluate_all(const Circuit& c, const GarbledCircuit& g,
                                       std::span<const Block> evaluator_labels);

}  // namespace trident::gc

#endif  // TRIDENT_GC_GARBLE_HPP_
