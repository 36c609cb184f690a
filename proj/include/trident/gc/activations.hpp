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

#ifndef TRIDENT_GC_ACTIVATIONS_HPP_
#define TRIDENT_GC_ACTIVATIONS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trident/gc/circuit.hpp"

namespace trident::gc {

enum class GcMode : std::uint8_t { kModT = 0, kTruncated = 1 };
const char* to_string(GcMode m);
GcMode parse_gc_mode(const std::string& s);

struct GcConfig {
  GcMode mode = GcMode::kTruncated;
  std::uint64_t t = 0;  // required in mod_t mode
  int t_bits = 0;
  int f = 0;
  int b = 0;         // operating width of the share inputs
  int out_bits = 0;  // width of the masked output
  int label_bits = 128;

  // b = t_bits - f. out_bits defaults to b (natural mod 2^b output).
  static GcConfig truncated(int t_bits, int f, int out_bits = 0);
  // Shares and output live in Z_t; a nonzero f shifts ReLU(x) by wiring.
  static GcConfig mod_t(std::uint64_t t, int f = 0);

  void validate() const;
  int in_width() const { return b; }
  int out_width() const { return out_bits; }
};

// Garbler inputs: s_x (in_width), s_y (out_width). Evaluator input: p_x.
// truncated: x = s_x + p_x mod 2^b read as two's complement,
//            out = max(x, 0) + s_y mod 2^out_bits.
// mod_t:     x = s_x + p_x mod t read centered,
//            out = (max(x, 0) >> f) + s_y mod t.
Circuit build_relu(const GcConfig& cfg);

// Garbler inputs: s_x[0..k), s_y. Evaluator inputs: p_x[0..k). Signed max
// over the k reconstructed values, optionally clamped at zero, then masked
// like build_relu.
Circuit build_maxpool(const GcConfig& cfg, int pool_size = 4, bool fuse_relu = true);

// Concatenates little-endian encodings of `values`, each `width` bits.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint64_t> values, int width);

}  // namespace trident::gc

#endif  // TRIDENT_GC_ACTIVATIONS_HPP_
