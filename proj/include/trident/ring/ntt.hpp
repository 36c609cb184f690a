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

#ifndef TRIDENT_RING_NTT_HPP_
#define TRIDENT_RING_NTT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "trident/ring/modulus.hpp"

namespace trident {

// Negacyclic NTT tables for Z_q[x]/(x^n + 1). The forward transform is an
// in-place Cooley-Tukey pass over powers of a primitive 2n-th root psi stored
// in bit-reversed order; output index j holds the evaluation at
// psi^(2 * bitrev(j) + 1). The inverse is the matching Gentleman-Sande pass.
class NttTables {
 public:
  NttTables(std::size_t n, const Modulus& q);

  std::size_t n() const { return n_; }
  const Modulus& modulus() const { return q_; }
  std::uint64_t psi() const { return psi_; }

  void forward(std::span<std::uint64_t> a) const;
  void inverse(std::span<std::uint64_t> a) const;

 private:
  std::size_t n_;
  int log_n_;
  Modulus q_;
  std::uint64_t psi_;
  std::vector<std::uint64_t> psi_rev_, psi_rev_shoup_;
  std::vector<std::uint64_t> inv_psi_rev_, inv_psi_rev_shoup_;
  std::uint64_t n_inv_, n_inv_shoup_;
};

std::uint32_t reverse_bits(std::uint32_t x, int bits);

}  // namespace trident

#endif  // TRIDENT_RING_NTT_HPP_
