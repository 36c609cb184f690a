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

#ifndef TRIDENT_LINEAR_LAYOUT_HPP_
#define TRIDENT_LINEAR_LAYOUT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trident/ring/batch_encoder.hpp"

namespace trident::linear {

// Channel-contiguous placement of a (channels, width, width) image into the
// first slot row: channel c sits at offset (c mod per_ct) * width^2 of
// ciphertext c / per_ct, pixels row-major inside it.
struct PackedLayout {
  int channels = 0;
  int width = 0;
  std::size_t row = 0;
  int per_ct = 0;

  static PackedLayout make(int channels, int width, std::size_t row);

  std::size_t plane() const { return static_cast<std::size_t>(width) * width; }
  int num_cts() const { return (channels + per_ct - 1) / per_ct; }
  int ct_of(int c) const { return c / per_ct; }
  int local(int c) const { return c % per_ct; }
  std::size_t slot(int c, int y, int x) const {
    return local(c) * plane() + static_cast<std::size_t>(y) * width + x;
  }
};

// values: channels * width^2 residues in [0, t), channel-major.
std::vector<SlotVector> pack_input(std::span<const std::uint64_t> values, const PackedLayout& layout,
                                   std::size_t n);
std::vector<std::uint64_t> unpack(const std::vector<SlotVector>& slots, const PackedLayout& layout);

// Vector layout for the diagonal method: x repeated with period `period`
// across the whole first row.
SlotVector pack_replicated(std::span<const std::uint64_t> values, std::size_t period, std::size_t n);

std::size_t next_pow2(std::size_t v);

}  // namespace trident::linear

#endif  // TRIDENT_LINEAR_LAYOUT_HPP_
