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

#include "trident/ring/modulus.hpp"

#include <bit>
#include <string>

#include "trident/common/error.hpp"

namespace trident {

Modulus::Modulus(std::uint64_t value) : q_(value) {
  if (value < 2 || value >= (std::uint64_t{1} << 62)) {
    throw ParameterError("modulus must lie in [2, 2^62), got " + std::to_string(value));
  }
  const u128 ratio = ~u128{0} / value;
  ratio_lo_ = static_cast<std::uint64_t>(ratio);
  ratio_hi_ = static_cast<std::uint64_t>(ratio >> 64);
  bits_ = 64 - std::countl_zero(value);
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t exp) const {
  std::uint64_t result = 1 % q_;
  base %= q_;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t Modulus::inv(std::uint64_t a) const {
  a %= q_;
  if (a == 0) throw ParameterError("zero has no modular inverse");
  return pow(a, q_ - 2);
}

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, b, m);
    b = mulmod64(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are sufficient for every n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t find_prime_congruent_one(int bits, std::uint64_t congruence) {
  if (bits < 2 || bits > 62 || congruence == 0) {
    throw ParameterError("find_prime_congruent_one: bad arguments");
  }
  const std::uint64_t limit = std::uint64_t{1} << bits;
  for (std::uint64_t k = (limit - 1) / congruence; k >= 1; --k) {
    const std::uint64_t candidate = k * congruence + 1;
    if (candidate < limit && is_prime(candidate)) return candidate;
  }
  throw ParameterError("no prime below 2^" + std::to_string(bits) + " congruent to 1 mod " +
                       std::to_string(congruence));
}

std::uint64_t primitive_root_of_unity(const Modulus& q, std::uint64_t order) {
  const std::uint64_t p = q.value();
  if (order == 0 || (p - 1) % order != 0) {
    throw ParameterError("modulus " + std::to_string(p) + " has no primitive root of order " +
                         std::to_string(order));
  }
  // For power-of-two order, g^((p-1)/order) is primitive iff its (order/2)-th power is -1.
  for (std::uint64_t g = 2; g < p; ++g) {
    const std::uint64_t root = q.pow(g, (p - 1) / order);
    if (order == 1) return root;
    if (q.pow(root, order / 2) == p - 1) return root;
  }
  throw ParameterError("no primitive root found");
}

}  // namespace trident
