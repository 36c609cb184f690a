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

#include "run_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "trident/common/error.hpp"

namespace trident::tools {

namespace {

template <typename T>
T get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParameterError(std::string("config: field '") + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("config: expected a JSON object");
  static const char* known[] = {"preset", "key_mode", "gc_mode", "delivery", "f", "lambda", "seed",
                                "value_bits", "w_A", "w_SW", "margin_bits", "endpoints"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) {
      throw ParameterError("config: unknown field '" + k + "'");
    }
  }
  RunConfig c;
  if (j.contains("preset")) c.preset = get<std::string>(j, "preset", "");
  if (j.contains("key_mode")) c.key_mode = bfv::parse_key_mode(get<std::string>(j, "key_mode", ""));
  if (j.contains("gc_mode")) c.gc_mode = gc::parse_gc_mode(get<std::string>(j, "gc_mode", ""));
  if (j.contains("delivery")) c.delivery = gc::parse_label_delivery(get<std::string>(j, "delivery", ""));
  c.f = get<int>(j, "f", c.f);
  c.lambda = get<int>(j, "lambda", c.lambda);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  c.value_bits = get<int>(j, "value_bits", c.value_bits);
  c.w_A = get<std::uint64_t>(j, "w_A", c.w_A);
  c.w_SW = get<std::uint64_t>(j, "w_SW", c.w_SW);
  c.margin_bits = get<double>(j, "margin_bits", c.margin_bits);
  if (j.contains("endpoints")) {
    const auto& e = j.at("endpoints");
    if (!e.is_object()) throw ParameterError("config: endpoints must be an object");
    for (const auto& [role, ep] : e.items()) {
      if (!ep.is_string()) throw ParameterError("config: endpoint for " + role + " must be a string");
      c.endpoints[protocol::parse_role(role)] = protocol::Endpoint::parse(ep.get<std::string>());
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("config " + path + ": " + e.what());
  }
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  if (preset) j["preset"] = *preset;
  j["key_mode"] = bfv::to_string(key_mode);
  j["gc_mode"] = gc::to_string(gc_mode);
  j["delivery"] = gc::to_string(delivery);
  j["f"] = f;
  j["lambda"] = lambda;
  j["seed"] = seed;
  j["value_bits"] = value_bits;
  j["w_A"] = w_A;
  j["w_SW"] = w_SW;
  j["margin_bits"] = margin_bits;
  if (!endpoints.empty()) {
    auto& e = j["endpoints"];
    for (const auto& [role, ep] : endpoints) e[protocol::to_string(role)] = ep.str();
  }
  return j;
}

void RunConfig::validate() const {
  if (preset) RingParams::preset(*preset);
  if (lambda < 0 || lambda > 60) throw ParameterError("config: lambda must be in [0, 60]");
  if (f < 0 || f > 60) throw ParameterError("config: f must be in [0, 60]");
  if (value_bits < 0 || value_bits > 62) throw ParameterError("config: value_bits must be in [0, 62]");
  if (margin_bits < 0) throw ParameterError("config: margin_bits must be non-negative");
}

std::string RunConfig::preset_for(const model::ModelSpec* m) const {
  if (!m) return preset.value_or("toy");
  if (preset && *preset != m->preset) {
    throw ParameterError("model '" + m->name + "' targets preset " + m->preset + ", config asks for " + *preset);
  }
  return m->preset;
}

protocol::ProtocolConfig RunConfig::protocol(const model::ModelSpec& m) const {
  validate();
  protocol::ProtocolConfig p;
  p.params = params(&m);
  p.key_mode = key_mode;
  p.gc_mode = gc_mode;
  p.delivery = delivery;
  p.lambda = lambda;
  p.value_bits = value_bits;
  p.seed = seed;
  p.w_A = w_A;
  p.w_SW = w_SW;
  p.margin_bits = margin_bits;
  return p;
}

RunConfig load_run_config(const std::string& explicit_path) {
  if (!explicit_path.empty()) return RunConfig::load_file(explicit_path);
  if (const char* env = std::getenv(kConfigEnv); env && *env) return RunConfig::load_file(env);
  return RunConfig{};
}

}  // namespace trident::tools
