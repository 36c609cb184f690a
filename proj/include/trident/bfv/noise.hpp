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

#ifndef TRIDENT_BFV_NOISE_HPP_
#define TRIDENT_BFV_NOISE_HPP_

#include <cstdint>
#include <vector>

#include "trident/bfv/ciphertext.hpp"

namespace trident::bfv {

// Remaining headroom log2(q / 2t) - log2(||v||_inf). Decryption is correct
// while bits > 0.
struct NoiseBudget {
  double bits = 0;
  std::uint64_t inf_norm = 0;
};

// v = [c0 + c1 s - delta m]_q, centered. Needs the secret key and the true
// plaintext, so it is a testing and diagnostics facility only.
std::vector<std::int64_t> noise_polynomial(const Context& ctx, const SecretKey& sk,
                                           const Ciphertext& ct, const Plaintext& expected);

NoiseBudget noise_budget(const Context& ctx, const SecretKey& sk, const Ciphertext& ct,
                         const Plaintext& expected);

// log2(q / 2t): the budget of a noiseless ciphertext.
double max_budget_bits(const RingParams& params);

}  // namespace trident::bfv

#endif  // TRIDENT_BFV_NOISE_HPP_
