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

#include "trident/bfv/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace trident::bfv {

std::vector<std::int64_t> noise_polynomial(const Context& ctx, const SecretKey& sk,
                                           const Ciphertext& ct, const Plaintext& expected) {
  const Polynomial v = decryption_phase(ctx, sk, ct) - ctx.scale_plain(expected);
  return v.centered();
}

double max_budget_bits(const RingParams& params) {
  return std::log2(static_cast<double>(params.q) / (2.0 * static_cast<double>(params.t)));
}

NoiseBudget noise_budget(const Context& ctx, const SecretKey& sk, const Ciphertext& ct,
                         const Plaintext& expected) {
  NoiseBudget out;
  for (auto v : noise_polynomial(ctx, sk, ct, expected)) {
    out.inf_norm = std::max<std::uint64_t>(out.inf_norm, static_cast<std::uint64_t>(std::llabs(v)));
  }
  out.bits = max_budget_bits(ctx.params()) -
             std::log2(static_cast<double>(std::max<std::uint64_t>(out.inf_norm, 1)));
  return out;
}

}  // namespace trident::bfv
