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

#ifndef TRIDENT_PROTOCOL_PLAN_HPP_
#define TRIDENT_PROTOCOL_PLAN_HPP_

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trident/bfv/context.hpp"
#include "trident/bfv/keys.hpp"
#include "trident/gc/activations.hpp"
#include "trident/gc/circuit.hpp"
#include "trident/gc/ot.hpp"
#include "trident/linear/layout.hpp"
#include "trident/model/model.hpp"
#include "trident/noise/noise_model.hpp"
#include "trident/protocol/mask.hpp"

namespace trident::protocol {

struct ProtocolConfig {
  RingParams params = RingParams::toy();
  bfv::KeyMode key_mode = bfv::KeyMode::kLogKeys;
  gc::GcMode gc_mode = gc::GcMode::kTruncated;
  gc::LabelDelivery delivery = gc::LabelDelivery::kBaseOt;
  int lambda = kDefaultLambda;
  int value_bits = 0;  // 0: use the model's declared bound
  std::uint64_t seed = 1;
  std::uint64_t w_A = 0;  // 0: chosen by the noise model
  std::uint64_t w_SW = 0;
  double margin_bits = 1.0;
  bool zero_mask = false;  // test hook: r = 0 and s_y at the bottom of its range
};

struct StagePlan {
  model::Stage stage;
  bool conv = false;
  linear::PackedLayout in_layout;   // conv stages
  linear::PackedLayout out_layout;  // conv stages
  std::size_t fc_period = 0;        // fc stages
  std::set<std::int64_t> steps;     // rotations the linear part may use

  bool has_activation = false;
  bool relu = false;
  int window = 1;                      // inputs per activation instance
  std::vector<std::uint32_t> gather;   // instances x window element indices
  gc::GcConfig gc;
  gc::Circuit circuit;
  std::uint64_t y_bound = 0;  // truncated mode: |activation output| <= y_bound

  std::size_t instances() const { return window ? gather.size() / window : 0; }
  // Range [lo, hi) of the output mask s_y.
  std::pair<std::uint64_t, std::uint64_t> output_mask_range() const;
};

// Everything every role derives from the public model shape and config.
struct SessionPlan {
  ProtocolConfig cfg;
  bfv::ContextPtr ctx;
  noise::BaseChoice bases;
  MaskPlan mask;
  std::vector<StagePlan> stages;
  std::vector<std::string> warnings;

  std::set<std::int64_t> client_steps() const;  // stage 0 runs under the client key
  std::set<std::int64_t> proxy_steps() const;
  std::vector<noise::LinearShape> network() const;
};

std::shared_ptr<const SessionPlan> make_plan(const model::ModelSpec& m, const ProtocolConfig& cfg);

// Slot vectors carrying `values` (residues mod t, channel-major) as the
// input of stage s.
std::vector<SlotVector> pack_stage_input(const SessionPlan& plan, std::size_t s,
                                         std::span<const std::uint64_t> values);
// Per-element values of stage s's linear output, read from decrypted slots.
std::vector<std::uint64_t> extract_stage_output(const SessionPlan& plan, std::size_t s,
                                                const std::vector<SlotVector>& slots);
std::size_t output_ciphertexts(const SessionPlan& plan, std::size_t s);

std::int64_t centered(std::uint64_t v, std::uint64_t t);
std::uint64_t to_residue(std::int64_t v, std::uint64_t t);

}  // namespace trident::protocol

#endif  // TRIDENT_PROTOCOL_PLAN_HPP_
