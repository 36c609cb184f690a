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

#include "trident/gc/stats.hpp"

namespace trident::gc {

CircuitStats circuit_stats(const Circuit& c, const GcConfig& cfg, LabelDelivery delivery) {
  const std::size_t label = static_cast<std::size_t>(cfg.label_bits) / 8;
  CircuitStats s;
  s.and_gates = c.and_count();
  s.xor_gates = c.xor_count();
  s.garbled_bytes = 4 * s.and_gates * label;
  const std::size_t per_bit = delivery == LabelDelivery::kBaseOt ? kOtBytesPerBit : label;
  s.online_label_bytes = c.evaluator_inputs.size() * per_bit;
  return s;
}

}  // namespace trident::gc
