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

#ifndef TRIDENT_GC_STATS_HPP_
#define TRIDENT_GC_STATS_HPP_

#include <cstddef>

#include "trident/gc/activations.hpp"
#include "trident/gc/circuit.hpp"
#include "trident/gc/ot.hpp"

namespace trident::gc {

struct CircuitStats {
  std::size_t and_gates = 0;
  std::size_t xor_gates = 0;
  std::size_t garbled_bytes = 0;       // tables, per instance
  std::size_t online_label_bytes = 0;  // evaluator input labels, per instance
};

// Per-batch OT overhead (one group element) is not included.
CircuitStats circuit_stats(const Circuit& c, const GcConfig& cfg,
                           LabelDelivery delivery = LabelDelivery::kDealer);

}  // namespace trident::gc

#endif  // TRIDENT_GC_STATS_HPP_
