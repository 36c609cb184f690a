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

#ifndef TRIDENT_TOOLS_RUN_CONFIG_HPP_
#define TRIDENT_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "trident/bfv/keys.hpp"
#include "trident/gc/activations.hpp"
#include "trident/gc/ot.hpp"
#include "trident/model/model.hpp"
#include "trident/protocol/net.hpp"
#include "trident/protocol/plan.hpp"
#include "trident/ring/params.hpp"

namespace trident::tools {

inline constexpr const char* kConfigEnv = "TRIDENT_CONFIG";

struct RunConfig {
  std::optional<std::string> preset;  // unset: follow the model
  bfv::KeyMode key_mode = bfv::KeyMode::kLogKeys;
  gc::GcMode gc_mode = gc::GcMode::kTruncated;
  gc::LabelDelivery delivery = gc::LabelDelivery::kBaseOt;
  int f = 9;  // truncated LSBs for gc-stats
  int lambda = protocol::kDefaultLambda;
  std::uint64_t seed = 1;
  int value_bits = 0;
  std::uint64_t w_A = 0;
  std::uint64_t w_SW = 0;
  double margin_bits = 1.0;
  std::map<protocol::Role, protocol::Endpoint> endpoints;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load_file(const std::string& path);
  nlohmann::ordered_json to_json() const;

  // Preset for a run on `m` (or none); throws ParameterError on a mismatch.
  std::string preset_for(const model::ModelSpec* m) const;
  RingParams params(const model::ModelSpec* m) const { return RingParams::preset(preset_for(m)); }
  protocol::ProtocolConfig protocol(const model::ModelSpec& m) const;
  void validate() const;
};

// --config if given, else $TRIDENT_CONFIG if set, else defaults.
RunConfig load_run_config(const std::string& explicit_path);

}  // namespace trident::tools

#endif  // TRIDENT_TOOLS_RUN_CONFIG_HPP_
