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

#include "trident/noise/noise_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "trident/common/error.hpp"
#include "trident/ring/decompose.hpp"

namespace trident::noise {

namespace {

double budget_bits(const RingParams& r) {
  return std::log2(static_cast<double>(r.q) / (2.0 * static_cast<double>(r.t)));
}

int log2_row(std::size_t n) { return std::countr_zero(n / 2); }

}  // namespace

NoiseParams NoiseParams::make(const RingParams& ring, std::uint64_t w_A, std::uint64_t w_SW,
                              bfv::KeyMode mode) {
  ring.validate();
  NoiseParams p;
  p.ring = ring;
  p.B = 6.0 * ring.sigma;
  p.w_A = w_A;
  p.l_A = digit_count(ring.q, w_A);
  p.w_SW = w_SW;
  p.l_SW = digit_count(ring.q, w_SW);
  p.keyswitches_per_rotation = mode == bfv::KeyMode::kLogKeys ? std::max(1, log2_row(ring.n)) : 1;
  return p;
}

NoiseEstimate NoiseEstimate::from_param(double param, const NoiseParams& p) {
  NoiseEstimate e;
  e.subgaussian_param = param;
  e.inf_norm_bound = p.tail * param;
  e.budget_bits_remaining = budget_bits(p.ring) - std::log2(e.inf_norm_bound);
  return e;
}

const char* to_string(Variant v) { return v == Variant::kGazelle ? "gazelle" : "impala"; }

NoiseEstimate fresh_noise(const NoiseParams& p) {
  return NoiseEstimate::from_param(std::sqrt(2.0 * p.ring.n) * p.ring.sigma, p);
}

NoiseEstimate pmult_amplification(const NoiseEstimate& est, const NoiseParams& p) {
  return NoiseEstimate::from_param(
      est.subgaussian_param * std::sqrt(static_cast<double>(p.ring.n)) * p.ring.t / 2.0, p);
}

NoiseEstimate automorphism_noise(const NoiseParams& p) {
  return NoiseEstimate::from_param(std::sqrt(static_cast<double>(p.l_A) * p.ring.n) *
                                       p.ring.sigma * static_cast<double>(p.w_A) / 2.0,
                                   p);
}

namespace {

double rotation_term(const NoiseParams& p, Variant variant) {
  const double w = static_cast<double>(p.w_A);
  const double k = p.keyswitches_per_rotation;
  const double t = static_cast<double>(p.ring.t);
  if (variant == Variant::kGazelle) return k * w * w * p.l_A / 4.0;
  return k * w * w * p.l_A / (t * t * static_cast<double>(p.ring.n));
}

double base_scale(const NoiseParams& p) {
  return static_cast<double>(p.ring.t) / 2.0 * static_cast<double>(p.ring.n) * p.ring.sigma;
}

}  // namespace

NoiseEstimate conv_output_noise(const NoiseParams& p, int c_i, int f_w, Variant variant) {
  const double param = static_cast<double>(f_w) * f_w * std::sqrt(static_cast<double>(c_i)) *
                       std::sqrt(2.0 + rotation_term(p, variant)) * base_scale(p);
  return NoiseEstimate::from_param(param, p);
}

NoiseEstimate fc_output_noise(const NoiseParams& p, std::size_t diagonals) {
  const double n_d = static_cast<double>(diagonals);
  const double unit = rotation_term(p, Variant::kImpala) / p.keyswitches_per_rotation;
  double rot = n_d * unit;
  if (p.keyswitches_per_rotation > 1 && diagonals > 1) {
    // Composed rotations: each power-of-two key serves half the diagonals,
    // and its digit-bias term adds up linearly across those uses.
    const double keys = std::ceil(std::log2(n_d));
    rot = keys * (n_d / 2) * (n_d / 2) * unit;
  }
  return NoiseEstimate::from_param(std::sqrt(2.0 * n_d + rot) * base_scale(p), p);
}

double keyswitch_noise(const NoiseParams& p) {
  return static_cast<double>(p.l_SW) * static_cast<double>(p.w_SW) * p.B *
         static_cast<double>(p.ring.n) / 2.0;
}

NoiseEstimate layer_noise(const NoiseParams& p, const LinearShape& s, Variant variant) {
  if (s.kind == LinearShape::Kind::kFc) return fc_output_noise(p, s.diagonals);
  const double c_o = std::max(1, s.c_o_per_ct);
  if (p.keyswitches_per_rotation == 1) {
    return NoiseEstimate::from_param(std::sqrt(c_o) * conv_output_noise(p, s.c_i, s.f_w, variant).subgaussian_param, p);
  }
  // Composed rotations: a power-of-two key may serve every term folded into
  // the output ciphertext, so its contributions are counted linearly.
  const double fw2 = static_cast<double>(s.f_w) * s.f_w;
  const double terms = c_o * s.c_i * fw2;
  const double unit = rotation_term(p, variant) / p.keyswitches_per_rotation;
  const double param2 = c_o * fw2 * fw2 * s.c_i * 2.0 + p.keyswitches_per_rotation * terms * terms * unit;
  return NoiseEstimate::from_param(std::sqrt(param2) * base_scale(p), p);
}

BaseChoice select_bases(const RingParams& ring, const std::vector<LinearShape>& network,
                        double safety_margin_bits, Variant variant, bfv::KeyMode mode,
                        double tail) {
  ring.validate();
  const double limit = static_cast<double>(ring.q) / (2.0 * static_cast<double>(ring.t)) *
                       std::exp2(-safety_margin_bits);
  const int top = std::bit_width(ring.q) - 1;  // 2^top <= q
  auto make = [&](std::uint64_t wa, std::uint64_t wsw) {
    NoiseParams p = NoiseParams::make(ring, wa, wsw, mode);
    p.tail = tail;
    return p;
  };
  auto fits = [&](const NoiseParams& p, std::size_t i) {
    const double cap = i == 0 ? 0.75 * limit : limit;
    return layer_noise(p, network[i], variant).inf_norm_bound < cap;
  };

  BaseChoice out;
  for (int e = (std::uint64_t{1} << top) == ring.q ? top - 1 : top; e >= 1; --e) {
    const NoiseParams p = make(std::uint64_t{1} << e, 2);
    bool ok = true;
    for (std::size_t i = 0; i < network.size() && ok; ++i) ok = fits(p, i);
    if (ok) {
      out.w_A = p.w_A;
      out.l_A = p.l_A;
      break;
    }
  }
  if (out.w_A == 0) {
    const NoiseParams p = make(2, 2);
    for (std::size_t i = 0; i < network.size(); ++i) {
      if (!fits(p, i)) {
        const double cap = i == 0 ? 0.75 * limit : limit;
        throw ParameterError("noise budget infeasible at layer " + std::to_string(i) +
                             (network[i].name.empty() ? "" : " (" + network[i].name + ")") +
                             ": estimate 2^" +
                             std::to_string(std::log2(layer_noise(p, network[i], variant).inf_norm_bound)) +
                             " exceeds the allowed 2^" + std::to_string(std::log2(cap)));
      }
    }
  }

  const double layer0 =
      network.empty() ? 0.0 : layer_noise(make(out.w_A, 2), network[0], variant).inf_norm_bound;
  const double ks_cap = 0.25 * (static_cast<double>(ring.q) / (2.0 * ring.t) - layer0);
  for (int e = (std::uint64_t{1} << top) == ring.q ? top - 1 : top; e >= 1; --e) {
    const NoiseParams p = make(out.w_A, std::uint64_t{1} << e);
    if (keyswitch_noise(p) < ks_cap && layer0 + keyswitch_noise(p) < limit) {
      out.w_SW = p.w_SW;
      out.l_SW = p.l_SW;
      break;
    }
  }
  if (out.w_SW == 0) throw ParameterError("noise budget infeasible for re-encryption at layer 0");
  return out;
}

std::vector<ReportRow> noise_report(const NoiseParams& p, const std::vector<LinearShape>& network,
                                    Variant variant) {
  std::vector<ReportRow> rows;
  const double full = budget_bits(p.ring);
  for (std::size_t i = 0; i < network.size(); ++i) {
    const auto est = layer_noise(p, network[i], variant);
    ReportRow r;
    r.layer = static_cast<int>(i);
    r.name = network[i].name;
    r.variant = variant;
    r.subgaussian_param = est.subgaussian_param;
    r.estimate_bits = std::log2(est.inf_norm_bound);
    double total = est.inf_norm_bound;
    if (i == 0) {
      const double ks = keyswitch_noise(p);
      r.keyswitch_bits = std::log2(ks);
      total += ks;
    }
    r.budget_remaining_bits = full - std::log2(total);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace trident::noise
