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

#include "trident/linear/fc.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "trident/common/error.hpp"

namespace trident::linear {

std::set<std::int64_t> PreparedFc::rotation_steps() const {
  std::set<std::int64_t> out;
  for (std::size_t d = 1; d < period; ++d) out.insert(static_cast<std::int64_t>(d));
  return out;
}

PreparedFc prepare_fc(std::span<const std::int64_t> matrix, int n_o, int n_i,
                      const bfv::Context& ctx) {
  if (n_o <= 0 || n_i <= 0) throw ParameterError("fc: dimensions must be positive");
  if (matrix.size() != static_cast<std::size_t>(n_o) * n_i) {
    throw ParameterError("fc: matrix has " + std::to_string(matrix.size()) + " entries, expected " +
                         std::to_string(static_cast<std::size_t>(n_o) * n_i));
  }
  const std::size_t row = ctx.row_size();
  PreparedFc p;
  p.n_i = n_i;
  p.n_o = n_o;
  p.period = std::max(next_pow2(n_i), next_pow2(n_o));
  if (p.period > row) {
    throw ParameterError("fc: " + std::to_string(n_o) + "x" + std::to_string(n_i) +
                         " exceeds the row capacity " + std::to_string(row));
  }
  const std::int64_t t = static_cast<std::int64_t>(ctx.params().t);
  for (auto v : matrix) {
    if (2 * v <= -t || 2 * v > t) throw ParameterError("fc: weight outside centered Z_t");
  }
  const std::size_t N = p.period;
  for (std::size_t d = 0; d < N; ++d) {
    SlotVector diag{std::vector<std::uint64_t>(ctx.n(), 0)};
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_o); ++i) {
      const std::size_t j = (i + d) % N;
      if (j >= static_cast<std::size_t>(n_i)) continue;
      diag.values[(i + d) % row] = ctx.t().from_signed(matrix[i * n_i + j]);
    }
    p.diagonals.push_back({ctx.lift_centered(ctx.encode(diag)).to_evaluation()});
  }
  return p;
}

FcResult he_fc(bfv::Evaluator& eval, const bfv::Ciphertext& input, const PreparedFc& p,
               const bfv::GaloisKeys& keys) {
  FcResult res;
  std::optional<bfv::Ciphertext> acc;
  for (std::size_t d = 0; d < p.period; ++d) {
    bfv::Ciphertext v = eval.mul_plain(input, p.diagonals[d]);
    ++res.ops.pmult;
    if (d != 0) {
      v = eval.rotate(v, static_cast<std::int64_t>(d), keys);
      ++res.ops.autom;
    }
    if (acc) {
      acc = eval.add(*acc, v);
      ++res.ops.add;
    } else {
      acc = std::move(v);
    }
  }
  res.output = std::move(*acc);
  return res;
}

OpCount fc_op_count(int n_o, int n_i) {
  const std::uint64_t N = std::max(next_pow2(n_i), next_pow2(n_o));
  return {N, N - 1, N - 1, 0};
}

}  // namespace trident::linear
