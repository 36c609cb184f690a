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

#include "trident/ring/batch_encoder.hpp"

#include <bit>

#include "trident/common/error.hpp"

namespace trident {

BatchEncoder::BatchEncoder(RingContextPtr plain_ctx) : ctx_(std::move(plain_ctx)) {
  const std::size_t n = ctx_->n();
  (void)ctx_->ntt();  // batching needs t ≡ 1 (mod 2n)
  const int log_n = std::countr_zero(n);
  const std::size_t row = n / 2;
  const std::uint64_t m = 2 * n;
  index_map_.resize(n);
  std::uint64_t pos = 1;
  for (std::size_t i = 0; i < row; ++i) {
    const auto idx1 = static_cast<std::uint32_t>((pos - 1) / 2);
    const auto idx2 = static_cast<std::uint32_t>((m - pos - 1) / 2);
    index_map_[i] = reverse_bits(idx1, log_n);
    index_map_[row + i] = reverse_bits(idx2, log_n);
    pos = (pos * 3) % m;
  }
}

Polynomial BatchEncoder::encode(const SlotVector& slots) const {
  const std::size_t n = ctx_->n();
  if (slots.size() != n) throw ParameterError("slot vector length must equal n");
  const auto t = ctx_->modulus().value();
  std::vector<std::uint64_t> evals(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (slots.values[i] >= t) throw ParameterError("slot value out of range [0, t)");
    evals[index_map_[i]] = slots.values[i];
  }
  return Polynomial::from_coeffs(ctx_, std::move(evals), Domain::kEvaluation).to_coefficient();
}

SlotVector BatchEncoder::decode(const Polynomial& plain) const {
  if (plain.n() != ctx_->n() || plain.modulus().value() != ctx_->modulus().value()) {
    throw ParameterError("decode: polynomial is not in R_t");
  }
  const Polynomial evals = plain.to_evaluation();
  SlotVector out{std::vector<std::uint64_t>(evals.n())};
  for (std::size_t i = 0; i < evals.n(); ++i) out.values[i] = evals[index_map_[i]];
  return out;
}

}  // namespace trident
