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

#ifndef TRIDENT_LINEAR_CONV_HPP_
#define TRIDENT_LINEAR_CONV_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "trident/bfv/evaluator.hpp"
#include "trident/linear/layout.hpp"

namespace trident::linear {

enum class Padding : std::uint8_t { kSame = 0, kValid = 1 };

struct ConvSpec {
  int c_i = 1;
  int c_o = 1;
  int f_w = 3;
  int w = 8;
  int stride = 1;
  Padding pad = Padding::kSame;

  void validate() const;
  int half() const { return f_w / 2; }
  int out_w() const;
  // Input-grid coordinate of output row/column `o`.
  int anchor(int o) const { return o * stride + (pad == Padding::kValid ? half() : 0); }
  std::size_t kernel_size() const {
    return static_cast<std::size_t>(c_o) * c_i * f_w * f_w;
  }
  std::size_t kernel_index(int co, int ci, int ky, int kx) const {
    return ((static_cast<std::size_t>(co) * c_i + ci) * f_w + ky) * f_w + kx;
  }
};

struct ConvTerm {
  int co = 0, ci = 0, dy = 0, dx = 0;
  std::int64_t weight = 0;
  std::int64_t offset = 0;  // left rotation applied after the multiply
  bool skip = false;
};

struct PreparedConv {
  ConvSpec spec;
  PackedLayout in_layout;
  PackedLayout out_layout;  // output anchors stay on the input grid
  std::vector<ConvTerm> terms;                   // one per kernel element, skips included
  std::vector<bfv::PlainMultiplier> masks;       // parallel to terms; empty for skips

  std::size_t live_terms() const;
  // Nonzero offsets a live term needs, for all-keys provisioning.
  std::set<std::int64_t> rotation_steps() const;
};

struct OpCount {
  std::uint64_t pmult = 0;
  std::uint64_t autom = 0;      // logical rotations
  std::uint64_t add = 0;        // accumulation adds within an output channel
  std::uint64_t merge_add = 0;  // folding output channels into a shared ciphertext
  friend bool operator==(const OpCount&, const OpCount&) = default;
};

// kernels: (c_o, c_i, f_w, f_w) row-major, centered integers in (-t/2, t/2].
PreparedConv prepare_conv(std::span<const std::int64_t> kernels, const ConvSpec& spec,
                          const bfv::Context& ctx);

// Pure count for a kernel, matching the raw execution path of he_conv.
// `row` is the slot row size n/2, which fixes channel placement.
OpCount op_count(const ConvSpec& spec, std::span<const std::int64_t> kernels, std::size_t row);
// Rotation count when products sharing an offset are summed before rotating.
std::uint64_t dedup_rotations(const PreparedConv& prepared);

struct ConvResult {
  std::vector<bfv::Ciphertext> outputs;  // one per output-channel group
  OpCount ops;
};

// Multiply each live term's mask into its input ciphertext, rotate by the
// term offset, accumulate per output channel, then merge channels.
ConvResult he_conv(bfv::Evaluator& eval, const std::vector<bfv::Ciphertext>& inputs,
                   const PreparedConv& prepared, const bfv::GaloisKeys& keys,
                   bool dedup_rotations = false);

// Reads the c_o * out_w^2 output values from decrypted output slots.
std::vector<std::uint64_t> extract_conv_output(const std::vector<SlotVector>& slots,
                                               const ConvSpec& spec, const PackedLayout& out_layout);

}  // namespace trident::linear

#endif  // TRIDENT_LINEAR_CONV_HPP_
