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

#ifndef TRIDENT_RING_BATCH_ENCODER_HPP_
#define TRIDENT_RING_BATCH_ENCODER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "trident/ring/polynomial.hpp"

namespace trident {

// n values mod t viewed as two rows of n/2 slots. Row r, column i is the
// evaluation at psi^(±3^i), so the Galois map x -> x^(3^k) rotates both rows
// left by k and x -> x^(2n-1) swaps them.
struct SlotVector {
  std::vector<std::uint64_t> values;

  std::size_t size() const { return values.size(); }
  std::size_t row_size() const { return values.size() / 2; }
  std::uint64_t& at(std::size_t row, std::size_t col) { return values[row * row_size() + col]; }
  std::uint64_t at(std::size_t row, std::size_t col) const {
    return values[row * row_size() + col];
  }
  friend bool operator==(const SlotVector&, const SlotVector&) = default;
};

// CRT batching between Z_t^n and R_t = Z_t[x]/(x^n + 1).
class BatchEncoder {
 public:
  explicit BatchEncoder(RingContextPtr plain_ctx);

  const RingContextPtr& context() const { return ctx_; }
  std::size_t slot_count() const { return ctx_->n(); }

  // Throws ParameterError for wrong length or a value >= t.
  Polynomial encode(const SlotVector& slots) const;
  SlotVector decode(const Polynomial& plain) const;

 private:
  RingContextPtr ctx_;
  std::vector<std::uint32_t> index_map_;
};

}  // namespace trident

#endif  // TRIDENT_RING_BATCH_ENCODER_HPP_
