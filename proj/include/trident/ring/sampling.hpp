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

#ifndef TRIDENT_RING_SAMPLING_HPP_
#define TRIDENT_RING_SAMPLING_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "trident/ring/polynomial.hpp"

namespace trident {

using Seed = std::array<std::uint8_t, 32>;

// Deterministic ChaCha20 keystream. Every random choice in the library draws
// from one of these, so a fixed seed reproduces every run bit for bit.
class Prng {
 public:
  explicit Prng(const Seed& seed);
  // Seed derived from (seed, domain) with BLAKE2b.
  Prng(std::uint64_t seed, std::string_view domain);

  // Independent child stream; does not advance this stream.
  Prng derive(std::string_view label) const;
  // Fresh 32-byte seed drawn from this stream.
  Seed next_seed();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  // Uniform in [0, bound) by rejection.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Uniform in [lo, hi).
  std::uint64_t uniform_range(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(hi - lo);
  }
  bool next_bit() { return next_u64() & 1; }

  const Seed& seed() const { return seed_; }

 private:
  void refill();

  Seed seed_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint8_t, 512> buffer_{};
  std::size_t pos_ = 512;
};

// Centered discrete Gaussian with parameter sigma truncated at ceil(6 sigma),
// sampled by inversion of a cumulative distribution table.
class GaussianSampler {
 public:
  explicit GaussianSampler(double sigma);

  double sigma() const { return sigma_; }
  std::int64_t bound() const { return bound_; }
  std::int64_t sample(Prng& prng) const;

 private:
  double sigma_;
  std::int64_t bound_;
  std::vector<std::uint64_t> cdt_;  // cumulative P(|x| <= k), scaled to 2^64
};

Polynomial sample_uniform(const RingContextPtr& ctx, Prng& prng);
Polynomial sample_gaussian(const RingContextPtr& ctx, const GaussianSampler& chi, Prng& prng);
Polynomial sample_ternary(const RingContextPtr& ctx, Prng& prng);

}  // namespace trident

#endif  // TRIDENT_RING_SAMPLING_HPP_
