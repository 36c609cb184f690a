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

#ifndef TRIDENT_LINEAR_FC_HPP_
#define TRIDENT_LINEAR_FC_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "trident/bfv/evaluator.hpp"
#include "trident/linear/conv.hpp"

namespace trident::linear {

// Diagonal-method weights. Diagonal d holds W[i][(i + d) mod N] at slot
// (i + d) mod row, so the multiply happens before the rotation by d.
struct PreparedFc {
  int n_i = 0;
  int n_o = 0;
  std::size_t period = 0;  // N: both dimensions padded to one power of two
  std::vector<bfv::PlainMultiplier> diagonals;

  std::set<std::int64_t> rotation_steps() const;
};

// matrix: n_o x n_i row-major, centered integers.
PreparedFc prepare_fc(std::span<const std::int64_t> matrix, int n_o, int n_i,
                      const bfv::Context& ctx);

struct FcResult {
  bfv::Ciphertext output;  // y in slots [0, n_o) of the first row
  OpCount ops;
};

// Input must be packed with pack_replicated(x, prepared.period, n). Every
// diagonal is processed whatever its content.
FcResult he_fc(bfv::Evaluator& eval, const bfv::Ciphertext& input, const PreparedFc& prepared,
               const bfv::GaloisKeys& keys);

OpCount fc_op_count(int n_o, int n_i);

}  // namespace trident::linear

#endif  // TRIDENT_LINEAR_FC_HPP_
