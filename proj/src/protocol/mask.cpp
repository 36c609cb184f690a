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

#include "trident/protocol/mask.hpp"

#include "trident/common/error.hpp"

namespace trident::protocol {

namespace {

std::uint64_t low_mask(int b) { return b >= 64 ? ~0ULL : (1ULL << b) - 1; }

}  // namespace

MaskPlan MaskPlan::make(gc::GcMode mode, std::uint64_t t, int value_bits, int requested_lambda) {
  MaskPlan p;
  p.mode = mode;
  p.t = t;
  p.value_bits = value_bits;
  if (mode == gc::GcMode::kModT) return p;
  if (value_bits < 1 || value_bits > 62) {
    throw ParameterError("mask plan: truncated mode needs a declared value bound m in [1, 62]");
  }
  if (requested_lambda < 0) throw ParameterError("mask plan: lambda must be non-negative");
  const auto fits = [&](int lambda) {
    const int top = value_bits + lambda;
    if (top >= 63) return false;
    return (1ULL << top) + (1ULL << (value_bits - 1)) < t;
  };
  int lambda = requested_lambda;
  while (lambda >= 0 && !fits(lambda)) --lambda;
  if (lambda < 0) {
    throw ParameterError("mask plan infeasible: 2^m + 2^(m-1) >= t for m = " + std::to_string(value_bits) +
                         ", t = " + std::to_string(t));
  }
  p.lambda = lambda;
  if (lambda < requested_lambda) {
    p.warning = "lambda reduced from " + std::to_string(requested_lambda) + " to " + std::to_string(lambda) +
                " bits so that x + r stays below t";
  }
  return p;
}

std::uint64_t MaskPlan::sample(Prng& prng) const {
  if (mode == gc::GcMode::kModT) return prng.uniform_below(t);
  return prng.uniform_range(1ULL << (value_bits - 1), 1ULL << (value_bits + lambda));
}

std::uint64_t truncate_proxy_share(std::uint64_t p, int f, int b) { return (p >> f) & low_mask(b); }

std::uint64_t truncate_cloud_share(std::uint64_t r, int f, int b) { return (0 - (r >> f)) & low_mask(b); }

}  // namespace trident::protocol
