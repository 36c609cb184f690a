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

#include "trident/ring/decompose.hpp"

#include <bit>

#include "trident/common/error.hpp"

namespace trident {

int digit_count(std::uint64_t q, std::uint64_t w) {
  if (w < 2) throw ParameterError("decomposition base must be >= 2");
  if (q < 2) throw ParameterError("modulus must be >= 2");
  int l = 0;
  for (std::uint64_t x = q - 1; x > 0; x /= w) ++l;
  return l == 0 ? 1 : l;
}

std::vector<Polynomial> base_decompose(const Polynomial& p, std::uint64_t w) {
  const Polynomial coeff = p.to_coefficient();
  const int l = digit_count(p.modulus().value(), w);
  const std::size_t n = coeff.n();
  std::vector<std::vector<std::uint64_t>> digits(l, std::vector<std::uint64_t>(n));
  const bool pow2 = std::has_single_bit(w);
  const int shift = std::countr_zero(w);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t c = coeff[j];
    for (int i = 0; i < l; ++i) {
      if (pow2) {
        digits[i][j] = c & (w - 1);
        c = shift >= 64 ? 0 : c >> shift;
      } else {
        digits[i][j] = c % w;
        c /= w;
      }
    }
  }
  std::vector<Polynomial> out;
  out.reserve(l);
  for (auto& d : digits) out.push_back(Polynomial::from_coeffs(coeff.context(), std::move(d)));
  return out;
}

}  // namespace trident
