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

#ifndef TRIDENT_TESTS_SUPPORT_FIXTURES_HPP_
#define TRIDENT_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <vector>

#include "trident/model/model.hpp"
#include "trident/protocol/plan.hpp"
#include "trident/ring/params.hpp"

namespace trident::testing {

// Random-weight tiny CNN with a value bound certified over `images`.
struct TinySetup {
  model::ModelSpec model;
  std::vector<std::vector<std::int64_t>> images;
};

inline TinySetup tiny_setup(int depth, std::size_t count, std::uint64_t seed, int width = 8, int c_o = 4,
                            double alpha = 0.3) {
  TinySetup s;
  auto skel = model::tiny_cnn_skeleton(width, c_o, 10, depth, 4);
  s.model = model::gen_random_model(skel, alpha, seed, 7).model;
  s.images = model::random_inputs(s.model.input, count, 0, 16, seed + 1).images;
  // Declared bound: the worst case over the images plus one bit of slack.
  const auto peak = model::max_linear_magnitude(s.model, s.images);
  int m = 2;
  while ((std::int64_t{1} << (m - 1)) <= 2 * peak) ++m;
  s.model.value_bits = m;
  model::certify_bound(s.model, s.images, m, RingParams::toy().t);
  return s;
}

}  // namespace trident::testing

#endif  // TRIDENT_TESTS_SUPPORT_FIXTURES_HPP_
