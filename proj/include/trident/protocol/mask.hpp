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

#ifndef TRIDENT_PROTOCOL_MASK_HPP_
#define TRIDENT_PROTOCOL_MASK_HPP_

#include <cstdint>
#include <string>

#include "trident/gc/activations.hpp"
#include "trident/ring/sampling.hpp"

namespace trident::protocol {

inline constexpr int kDefaultLambda = 40;

// How the cloud draws the additive mask r for a linear output x.
// mod_t: r uniform over Z_t. truncated: r uniform over [2^(m-1), 2^(m+lambda))
// with 2^(m+lambda) + 2^(m-1) < t, so x + r never wraps when |x| < 2^(m-1).
struct MaskPlan {
  gc::GcMode mode = gc::GcMode::kTruncated;
  std::uint64_t t = 0;
  int value_bits = 0;  // m
  int lambda = 0;
  std::string warning;  // set when lambda had to shrink

  // Largest lambda <= requested that fits; ParameterError when none does.
  static MaskPlan make(gc::GcMode mode, std::uint64_t t, int value_bits, int requested_lambda = kDefaultLambda);
  std::uint64_t sample(Prng& prng) const;
};

// Local share truncation to b bits. With p = x + r (no wrap) the two results
// add up to floor(x / 2^f) or floor(x / 2^f) + 1 modulo 2^b.
std::uint64_t truncate_proxy_share(std::uint64_t p, int f, int b);
std::uint64_t truncate_cloud_share(std::uint64_t r, int f, int b);

}  // namespace trident::protocol

#endif  // TRIDENT_PROTOCOL_MASK_HPP_
