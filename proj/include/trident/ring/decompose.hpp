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

#ifndef TRIDENT_RING_DECOMPOSE_HPP_
#define TRIDENT_RING_DECOMPOSE_HPP_

#include <cstdint>
#include <vector>

#include "trident/ring/polynomial.hpp"

namespace trident {

// Number of base-w digits needed for any residue in [0, q). This is
// floor(log_w q) + 1 except for the degenerate base w >= q, which is one digit.
int digit_count(std::uint64_t q, std::uint64_t w);

// Splits every coefficient of p into digits in [0, w) such that
// sum_i w^i * digits[i] == p coefficient-wise over the integers.
std::vector<Polynomial> base_decompose(const Polynomial& p, std::uint64_t w);

}  // namespace trident

#endif  // TRIDENT_RING_DECOMPOSE_HPP_
