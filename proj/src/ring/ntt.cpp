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

#include "trident/ring/ntt.hpp"

#include <bit>
#include <string>

#include "trident/common/error.hpp"

namespace trident {

std::uint32_t reverse_bits(std::uint32_t x, int bits) {
  std::uint32_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

NttTables::NttTables(std::size_t n, const Modulus& q) : n_(n), q_(q) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw ParameterError("ring degree must be a power of two >= 2, got " + std::to_string(n));
  }
  log_n_ = std::countr_zero(n);
  psi_ = primitive_root_of_unity(q, 2 * n);
  const std::uint64_t psi_inv = q.inv(psi_);
  psi_rev_.resize(n);
  inv_psi_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  inv_psi_rev_shoup_.resize(n);
  std::uint64_t power = 1, inv_power = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = reverse_bits(static_cast<std::uint32_t>(i), log_n_);
    psi_rev_[r] = power;
    inv_psi_rev_[r] = inv_power;
    power = q.mul(power, psi_);
    inv_power = q.mul(inv_power, psi_inv);
  }
  for (std::size_t i = 0; i < n; ++i) {
    psi_rev_shoup_[i] = q.shoup(psi_rev_[i]);
    inv_psi_rev_shoup_[i] = q.shoup(inv_psi_rev_[i]);
  }
  n_inv_ = q.inv(n % q.value());
  n_inv_shoup_ = q.shoup(n_inv_);
}

void NttTables::forward(std::span<std::uint64_t> a) const {
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const std::uint64_t w = psi_rev_[m + i];
      const std::uint64_t ws = psi_rev_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const std::uint64_t u = a[j];
        const std::uint64_t v = q_.mul_shoup(a[j + t], w, ws);
        a[j] = q_.add(u, v);
        a[j + t] = q_.sub(u, v);
      }
    }
  }
}

void NttTables::inverse(std::span<std::uint64_t> a) const {
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint64_t w = inv_psi_rev_[h + i];
      const std::uint64_t ws = inv_psi_rev_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const std::uint64_t u = a[j];
        const std::uint64_t v = a[j + t];
        a[j] = q_.add(u, v);
        a[j + t] = q_.mul_shoup(q_.sub(u, v), w, ws);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = q_.mul_shoup(x, n_inv_, n_inv_shoup_);
}

}  // namespace trident
