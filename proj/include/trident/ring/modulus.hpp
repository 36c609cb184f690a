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

#ifndef TRIDENT_RING_MODULUS_HPP_
#define TRIDENT_RING_MODULUS_HPP_

#include <cstdint>

namespace trident {

using u128 = unsigned __int128;

// A word-sized modulus below 2^62 with precomputed Barrett constants.
// Reduction of a 128-bit product uses floor(2^128 / q) split into two words.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(std::uint64_t value);

  std::uint64_t value() const { return q_; }
  int bits() const { return bits_; }

  std::uint64_t reduce(std::uint64_t x) const { return x % q_; }

  std::uint64_t reduce128(u128 x) const {
    const std::uint64_t x0 = static_cast<std::uint64_t>(x);
    const std::uint64_t x1 = static_cast<std::uint64_t>(x >> 64);
    const u128 p00 = static_cast<u128>(x0) * ratio_lo_;
    const u128 p01 = static_cast<u128>(x0) * ratio_hi_;
    const u128 p10 = static_cast<u128>(x1) * ratio_lo_;
    const u128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) +
                     static_cast<std::uint64_t>(p10);
    const std::uint64_t quot = x1 * ratio_hi_ + static_cast<std::uint64_t>(p01 >> 64) +
                               static_cast<std::uint64_t>(p10 >> 64) +
                               static_cast<std::uint64_t>(mid >> 64);
    std::uint64_t r = x0 - quot * q_;
    while (r >= q_) r -= q_;
    return r;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce128(static_cast<u128>(a) * b);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  // Requires gcd(a, q) == 1; q is prime for every modulus used here.
  std::uint64_t inv(std::uint64_t a) const;

  // Maps a signed integer into [0, q).
  std::uint64_t from_signed(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
  }
  // Centered lift into (-q/2, q/2].
  std::int64_t centered(std::uint64_t a) const {
    return a > q_ / 2 ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(q_)
                      : static_cast<std::int64_t>(a);
  }

  // Shoup precomputation floor(w * 2^64 / q) for a fixed multiplicand w.
  std::uint64_t shoup(std::uint64_t w) const {
    return static_cast<std::uint64_t>((static_cast<u128>(w) << 64) / q_);
  }
  std::uint64_t mul_shoup(std::uint64_t x, std::uint64_t w, std::uint64_t w_shoup) const {
    const std::uint64_t hi = static_cast<std::uint64_t>((static_cast<u128>(x) * w_shoup) >> 64);
    std::uint64_t r = x * w - hi * q_;
    return r >= q_ ? r - q_ : r;
  }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.q_ == b.q_; }

 private:
  std::uint64_t q_ = 0;
  std::uint64_t ratio_lo_ = 0;
  std::uint64_t ratio_hi_ = 0;
  int bits_ = 0;
};

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n);

// Largest prime p < 2^bits with p ≡ 1 (mod congruence). Throws if none exists.
std::uint64_t find_prime_congruent_one(int bits, std::uint64_t congruence);

// A primitive root of unity of the given power-of-two order modulo a prime q.
// Deterministic for a fixed q. Throws ParameterError when order does not divide q-1.
std::uint64_t primitive_root_of_unity(const Modulus& q, std::uint64_t order);

}  // namespace trident

#endif  // TRIDENT_RING_MODULUS_HPP_
