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

#include "trident/ring/params.hpp"

#include <bit>

#include "trident/common/error.hpp"
#include "trident/ring/modulus.hpp"

namespace trident {

void RingParams::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError("ring params: " + msg); };
  if (n < 2 || !std::has_single_bit(n)) fail("n must be a power of two >= 2");
  if (q >= (std::uint64_t{1} << 62)) fail("q must be below 2^62");
  if (!is_prime(q)) fail("q must be prime");
  if (!is_prime(t)) fail("t must be prime");
  if (q <= t) fail("q must exceed t");
  if (q % (2 * n) != 1) fail("q must be 1 mod 2n");
  if (t % (2 * n) != 1) fail("t must be 1 mod 2n");
  if (!(sigma > 0)) fail("sigma must be positive");
}

int RingParams::t_bits() const {
  return t <= 1 ? 0 : 64 - std::countl_zero(t - 1);
}

RingParams RingParams::toy() {
  return RingParams{2048, 1152921504346550273ULL, 307201ULL, 3.2};
}

RingParams RingParams::paper() {
  return RingParams{4096, 1152921464242716673ULL, 417793ULL, 3.2};
}

RingParams RingParams::preset(const std::string& name) {
  if (name == "toy") return toy();
  if (name == "paper") return paper();
  throw ParameterError("unknown preset '" + name + "' (expected toy or paper)");
}

RingParams RingParams::with_plain_modulus(std::size_t n, std::uint64_t t, int q_bits,
                                          double sigma) {
  RingParams p{n, 0, t, sigma};
  p.q = find_prime_congruent_one(q_bits, 2 * n * t);
  p.validate();
  return p;
}

}  // namespace trident
