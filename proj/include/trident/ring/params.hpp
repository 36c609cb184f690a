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

#ifndef TRIDENT_RING_PARAMS_HPP_
#define TRIDENT_RING_PARAMS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

namespace trident {

// (n, q, t, sigma). Both moduli are primes congruent to 1 mod 2n so that R_q
// admits a negacyclic NTT and R_t splits into n batching slots.
struct RingParams {
  std::size_t n = 0;
  std::uint64_t q = 0;
  std::uint64_t t = 0;
  double sigma = 3.2;

  // Throws ParameterError describing the first violated invariant.
  void validate() const;

  // ceil(log2 t).
  int t_bits() const;
  std::size_t row_size() const { return n / 2; }

  // n = 2048, 19-bit t, 60-bit q.
  static RingParams toy();
  // n = 4096, 19-bit t, 60-bit q.
  static RingParams paper();
  // Looks up "toy" or "paper".
  static RingParams preset(const std::string& name);

  // Finds a q_bits-bit prime q ≡ 1 (mod 2nt); used by tests with small rings.
  static RingParams with_plain_modulus(std::size_t n, std::uint64_t t, int q_bits = 60,
                                       double sigma = 3.2);

  friend bool operator==(const RingParams&, const RingParams&) = default;
};

}  // namespace trident

#endif  // TRIDENT_RING_PARAMS_HPP_
