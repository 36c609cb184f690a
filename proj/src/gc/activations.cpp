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

#include "trident/gc/activations.hpp"

#include <bit>

#include "trident/common/error.hpp"

namespace trident::gc {

const char* to_string(GcMode m) { return m == GcMode::kModT ? "mod_t" : "truncated"; }

GcMode parse_gc_mode(const std::string& s) {
  if (s == "mod_t" || s == "mod-t") return GcMode::kModT;
  if (s == "truncated") return GcMode::kTruncated;
  throw ParameterError("unknown gc mode '" + s + "' (expected mod_t or truncated)");
}

GcConfig GcConfig::truncated(int t_bits, int f, int out_bits) {
  GcConfig c;
  c.mode = GcMode::kTruncated;
  c.t_bits = t_bits;
  c.f = f;
  c.b = t_bits - f;
  c.out_bits = out_bits == 0 ? c.b : out_bits;
  c.validate();
  return c;
}

GcConfig GcConfig::mod_t(std::uint64_t t, int f) {
  GcConfig c;
  c.mode = GcMode::kModT;
  c.t = t;
  c.t_bits = t < 2 ? 0 : std::bit_width(t - 1);
  c.f = f;
  c.b = c.t_bits;
  c.out_bits = c.t_bits;
  c.validate();
  return c;
}

void GcConfig::validate() const {
  if (t_bits <= 0 || t_bits > 62) throw ParameterError("gc: t_bits must be in [1, 62]");
  if (b < 1 || b > t_bits) throw ParameterError("gc: width b must be in [1, t_bits]");
  if (f < 0 || f >= t_bits) throw ParameterError("gc: f must be in [0, t_bits)");
  if (label_bits != 128) throw ParameterError("gc: only 128-bit labels are supported");
  if (mode == GcMode::kTruncated) {
    if (b != t_bits - f) throw ParameterError("gc: truncated mode needs b = t_bits - f");
    if (out_bits < b || out_bits > 62) throw ParameterError("gc: out_bits must be in [b, 62]");
  } else {
    if (t < 3 || static_cast<int>(std::bit_width(t - 1)) != t_bits) throw ParameterError("gc: mod_t mode needs t");
    if (b != t_bits || out_bits != t_bits) throw ParameterError("gc: mod_t widths must equal t_bits");
  }
}

namespace {

// (a + b) mod t for a, b in [0, t), both tb bits wide.
Word add_mod_t(CircuitBuilder& cb, const Word& a, const Word& b, std::uint64_t t, int tb) {
  const Word s = add(cb, a, b, tb + 1);
  Bit ge = Bit::constant(false);
  const Word d = sub(cb, s, constant_word(t, tb + 1), tb + 1, &ge);
  return resize(mux(cb, ge, d, s), tb, false);
}

// Two's-complement value of width tb + 1 for a centered residue x in [0, t).
Word centered_signed(CircuitBuilder& cb, const Word& x, std::uint64_t t, int tb) {
  Bit neg = Bit::constant(false);  // x >= (t + 1) / 2 means negative
  sub(cb, x, constant_word((t + 1) / 2, tb), tb, &neg);
  const Word wide = resize(x, tb + 1, false);
  const Word minus_t = sub(cb, wide, constant_word(t, tb + 1), tb + 1);
  return mux(cb, neg, minus_t, wide);
}

Word shift_right(const Word& w, int f) {
  Word out(w.begin() + std::min<std::size_t>(f, w.size()), w.end());
  return resize(out, static_cast<int>(w.size()), true);
}

Word relu_of_signed(CircuitBuilder& cb, const Word& x) {
  const Bit keep = cb.NOT(x.back());
  Word out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) out.push_back(cb.AND(x[i], keep));
  out.push_back(Bit::constant(false));
  return out;
}

Word signed_max(CircuitBuilder& cb, std::vector<Word> v) {
  while (v.size() > 1) {
    std::vector<Word> next;
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) {
      const Bit lt = less_signed(cb, v[i], v[i + 1]);
      next.push_back(mux(cb, lt, v[i + 1], v[i]));
    }
    if (v.size() % 2) next.push_back(v.back());
    v = std::move(next);
  }
  return v.front();
}

// Masks a signed result m (two's complement, any width) into the output.
void mask_output(CircuitBuilder& cb, const GcConfig& cfg, const Word& m, const Word& sy) {
  if (cfg.mode == GcMode::kTruncated) {
    cb.output(add(cb, resize(m, cfg.out_bits, true), sy, cfg.out_bits));
    return;
  }
  const int tb = cfg.t_bits;
  // Back to [0, t): add t when negative.
  const Word wide = resize(m, tb + 1, true);
  const Word fixed = add(cb, wide, and_all(cb, constant_word(cfg.t, tb + 1), wide.back()), tb + 1);
  cb.output(add_mod_t(cb, resize(fixed, tb, false), sy, cfg.t, tb));
}

}  // namespace

Circuit build_relu(const GcConfig& cfg) {
  cfg.validate();
  CircuitBuilder cb;
  const int w = cfg.in_width();
  const Word sx = cb.garbler_input(w);
  const Word sy = cb.garbler_input(cfg.out_width());
  const Word px = cb.evaluator_input(w);
  if (cfg.mode == GcMode::kTruncated) {
    const Word x = add(cb, sx, px, w);
    mask_output(cb, cfg, relu_of_signed(cb, x), sy);
  } else {
    const int tb = cfg.t_bits;
    const Word x = add_mod_t(cb, sx, px, cfg.t, tb);
    Bit neg = Bit::constant(false);
    sub(cb, x, constant_word((cfg.t + 1) / 2, tb), tb, &neg);
    const Word r = and_all(cb, x, cb.NOT(neg));
    const Word shifted = resize(Word(r.begin() + cfg.f, r.end()), tb, false);
    cb.output(add_mod_t(cb, shifted, sy, cfg.t, tb));
  }
  return cb.finish();
}

Circuit build_maxpool(const GcConfig& cfg, int pool_size, bool fuse_relu) {
  cfg.validate();
  if (pool_size < 1) throw ParameterError("maxpool: pool size must be positive");
  CircuitBuilder cb;
  const int w = cfg.in_width();
  std::vector<Word> sx;
  for (int i = 0; i < pool_size; ++i) sx.push_back(cb.garbler_input(w));
  const Word sy = cb.garbler_input(cfg.out_width());
  std::vector<Word> px;
  for (int i = 0; i < pool_size; ++i) px.push_back(cb.evaluator_input(w));
  std::vector<Word> vals;
  for (int i = 0; i < pool_size; ++i) {
    if (cfg.mode == GcMode::kTruncated) {
      vals.push_back(add(cb, sx[i], px[i], w));
    } else {
      vals.push_back(centered_signed(cb, add_mod_t(cb, sx[i], px[i], cfg.t, cfg.t_bits), cfg.t, cfg.t_bits));
    }
  }
  Word m = signed_max(cb, vals);
  if (fuse_relu) m = relu_of_signed(cb, m);
  if (cfg.mode == GcMode::kModT) m = shift_right(m, cfg.f);
  mask_output(cb, cfg, m, sy);
  return cb.finish();
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint64_t> values, int width) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size() * width);
  for (auto v : values) {
    const auto b = to_bits(v, width);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace trident::gc
