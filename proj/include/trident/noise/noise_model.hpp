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

#ifndef TRIDENT_NOISE_NOISE_MODEL_HPP_
#define TRIDENT_NOISE_NOISE_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "trident/bfv/keys.hpp"
#include "trident/ring/params.hpp"

namespace trident::noise {

// Converts sub-Gaussian parameters into infinity-norm bounds.
inline constexpr double kDefaultTailFactor = 6.0;

struct NoiseParams {
  RingParams ring;
  double B = 0;  // per-coefficient error bound, 6 sigma
  std::uint64_t w_A = 2;
  int l_A = 0;
  std::uint64_t w_SW = 2;
  int l_SW = 0;
  double tail = kDefaultTailFactor;
  // Key switches behind one logical rotation: 1 with all keys, up to
  // log2(n/2) when rotations are composed from powers of two.
  int keyswitches_per_rotation = 1;

  static NoiseParams make(const RingParams& ring, std::uint64_t w_A, std::uint64_t w_SW,
                          bfv::KeyMode mode = bfv::KeyMode::kAllKeys);
};

struct NoiseEstimate {
  double subgaussian_param = 0;
  double inf_norm_bound = 0;
  double budget_bits_remaining = 0;

  static NoiseEstimate from_param(double param, const NoiseParams& p);
};

enum class Variant : std::uint8_t { kGazelle, kImpala };
const char* to_string(Variant v);

// sqrt(2n) sigma.
NoiseEstimate fresh_noise(const NoiseParams& p);
// Parameter times sqrt(n) t / 2.
NoiseEstimate pmult_amplification(const NoiseEstimate& est, const NoiseParams& p);
// sqrt(l_A n) sigma w_A / 2, added once per key switch.
NoiseEstimate automorphism_noise(const NoiseParams& p);

// gazelle: f_w^2 sqrt(c_i) sqrt(2 + k w_A^2 l_A / 4) (t/2) n sigma
// impala:  f_w^2 sqrt(c_i) sqrt(2 + k w_A^2 l_A / (t^2 n)) (t/2) n sigma
// with k = keyswitches_per_rotation.
NoiseEstimate conv_output_noise(const NoiseParams& p, int c_i, int f_w, Variant variant);
// Diagonal method with N diagonals, multiply before rotate:
// sqrt(2N + R w_A^2 l_A / (t^2 n)) (t/2) n sigma, where R = N with one key
// per rotation and R = ceil(log2 N) (N/2)^2 with composed rotations.
NoiseEstimate fc_output_noise(const NoiseParams& p, std::size_t diagonals);

// l_SW w_SW B n / 2, an infinity-norm bound.
double keyswitch_noise(const NoiseParams& p);

// Shape of one linear layer as the noise model sees it.
struct LinearShape {
  enum class Kind : std::uint8_t { kConv, kFc };
  Kind kind = Kind::kConv;
  int c_i = 1;
  int f_w = 1;
  std::size_t diagonals = 0;
  std::string name;
  int c_o_per_ct = 1;  // conv output channels folded into one ciphertext
};

// Conv layers scale the table row by the channels sharing the output
// ciphertext. With composed rotations the key-switch part grows with the
// square of the term count, since digits are biased and keys are reused.
NoiseEstimate layer_noise(const NoiseParams& p, const LinearShape& s, Variant variant);

struct BaseChoice {
  std::uint64_t w_A = 0;
  int l_A = 0;
  std::uint64_t w_SW = 0;
  int l_SW = 0;
};

// Largest power-of-two w_A such that every layer keeps safety_margin_bits of
// budget, with a quarter of layer 0's headroom reserved for re-encryption;
// then the largest w_SW whose bound stays under that quarter. Throws
// ParameterError naming the first layer that cannot fit.
BaseChoice select_bases(const RingParams& ring, const std::vector<LinearShape>& network,
                        double safety_margin_bits, Variant variant = Variant::kImpala,
                        bfv::KeyMode mode = bfv::KeyMode::kAllKeys,
                        double tail = kDefaultTailFactor);

struct ReportRow {
  int layer = 0;
  std::string name;
  Variant variant = Variant::kImpala;
  double subgaussian_param = 0;
  double estimate_bits = 0;  // log2 of the infinity-norm bound
  double keyswitch_bits = 0;  // nonzero only where re-encryption happens
  double budget_remaining_bits = 0;
};

std::vector<ReportRow> noise_report(const NoiseParams& p, const std::vector<LinearShape>& network,
                                    Variant variant = Variant::kImpala);

}  // namespace trident::noise

#endif  // TRIDENT_NOISE_NOISE_MODEL_HPP_
