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

#include "trident/linear/conv.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>

#include "trident/common/error.hpp"

namespace trident::linear {

void ConvSpec::validate() const {
  if (c_i <= 0 || c_o <= 0 || w <= 0) throw ParameterError("conv: dimensions must be positive");
  if (f_w <= 0 || f_w % 2 == 0) throw ParameterError("conv: kernel width must be odd");
  if (stride != 1 && stride != 2) throw ParameterError("conv: stride must be 1 or 2");
  if (pad == Padding::kValid && f_w > w) throw ParameterError("conv: kernel wider than image");
}

int ConvSpec::out_w() const {
  if (pad == Padding::kSame) return (w + stride - 1) / stride;
  return (w - f_w) / stride + 1;
}

std::size_t PreparedConv::live_terms() const {
  std::size_t n = 0;
  for (const auto& t : terms) n += !t.skip;
  return n;
}

std::set<std::int64_t> PreparedConv::rotation_steps() const {
  std::set<std::int64_t> out;
  for (const auto& t : terms) {
    if (!t.skip && t.offset != 0) out.insert(t.offset);
  }
  return out;
}

namespace {

bool is_anchor(const ConvSpec& s, int y) {
  const int base = s.pad == Padding::kValid ? s.half() : 0;
  if (y < base || (y - base) % s.stride != 0) return false;
  return (y - base) / s.stride < s.out_w();
}

// Input and output layouts share per_ct, so local indices are comparable.
std::int64_t term_offset(const ConvSpec& s, const PackedLayout& l, int co, int ci, int dy, int dx) {
  return (static_cast<std::int64_t>(l.local(ci)) - l.local(co)) * static_cast<std::int64_t>(l.plane()) +
         static_cast<std::int64_t>(dy) * s.w + dx;
}

}  // namespace

PreparedConv prepare_conv(std::span<const std::int64_t> kernels, const ConvSpec& spec,
                          const bfv::Context& ctx) {
  spec.validate();
  if (kernels.size() != spec.kernel_size()) {
    throw ParameterError("conv: kernel tensor has " + std::to_string(kernels.size()) +
                         " elements, expected " + std::to_string(spec.kernel_size()));
  }
  const std::int64_t t = static_cast<std::int64_t>(ctx.params().t);
  PreparedConv p;
  p.spec = spec;
  p.in_layout = PackedLayout::make(spec.c_i, spec.w, ctx.row_size());
  p.out_layout = PackedLayout::make(spec.c_o, spec.w, ctx.row_size());
  const int h = spec.half();
  for (int co = 0; co < spec.c_o; ++co) {
    for (int ci = 0; ci < spec.c_i; ++ci) {
      for (int ky = 0; ky < spec.f_w; ++ky) {
        for (int kx = 0; kx < spec.f_w; ++kx) {
          const std::int64_t wv = kernels[spec.kernel_index(co, ci, ky, kx)];
          if (2 * wv <= -t || 2 * wv > t) {
            throw ParameterError("conv: weight " + std::to_string(wv) + " outside centered Z_t");
          }
          ConvTerm term{co, ci, ky - h, kx - h, wv, 0, wv == 0};
          term.offset = term_offset(spec, p.in_layout, co, ci, term.dy, term.dx);
          p.terms.push_back(term);
          if (term.skip) {
            p.masks.emplace_back();
            continue;
          }
          // Source slot (ci, Y+dy, X+dx) carries the weight when the anchor
          // (Y, X) is an output and the source lies inside the image.
          SlotVector mask{std::vector<std::uint64_t>(ctx.n(), 0)};
          const std::uint64_t enc = ctx.t().from_signed(wv);
          for (int y = 0; y < spec.w; ++y) {
            if (!is_anchor(spec, y)) continue;
            const int sy = y + term.dy;
            if (sy < 0 || sy >= spec.w) continue;
            for (int x = 0; x < spec.w; ++x) {
              if (!is_anchor(spec, x)) continue;
              const int sx = x + term.dx;
              if (sx < 0 || sx >= spec.w) continue;
              mask.values[p.in_layout.slot(ci, sy, sx)] = enc;
            }
          }
          p.masks.push_back({ctx.lift_centered(ctx.encode(mask)).to_evaluation()});
        }
      }
    }
  }
  return p;
}

OpCount op_count(const ConvSpec& spec, std::span<const std::int64_t> kernels, std::size_t row) {
  spec.validate();
  if (kernels.size() != spec.kernel_size()) throw ParameterError("conv: kernel shape mismatch");
  const PackedLayout l = PackedLayout::make(1, spec.w, row);
  OpCount c;
  const int h = spec.half();
  for (int co = 0; co < spec.c_o; ++co) {
    std::uint64_t live = 0;
    for (int ci = 0; ci < spec.c_i; ++ci) {
      for (int ky = 0; ky < spec.f_w; ++ky) {
        for (int kx = 0; kx < spec.f_w; ++kx) {
          if (kernels[spec.kernel_index(co, ci, ky, kx)] == 0) continue;
          ++live;
          ++c.pmult;
          const bool zero_offset = l.local(ci) == l.local(co) && ky == h && kx == h;
          if (!zero_offset) ++c.autom;
        }
      }
    }
    if (live > 0) c.add += live - 1;
  }
  return c;
}

std::uint64_t dedup_rotations(const PreparedConv& p) {
  std::set<std::pair<int, std::int64_t>> keys;
  for (const auto& t : p.terms) {
    if (!t.skip && t.offset != 0) keys.insert({p.out_layout.ct_of(t.co), t.offset});
  }
  return keys.size();
}

ConvResult he_conv(bfv::Evaluator& eval, const std::vector<bfv::Ciphertext>& inputs,
                   const PreparedConv& p, const bfv::GaloisKeys& keys, bool dedup) {
  if (inputs.size() != static_cast<std::size_t>(p.in_layout.num_cts())) {
    throw ParameterError("he_conv: expected " + std::to_string(p.in_layout.num_cts()) +
                         " input ciphertexts");
  }
  const bfv::KeyOwner owner = inputs.front().owner();
  ConvResult res;
  const int groups = p.out_layout.num_cts();
  std::vector<std::optional<bfv::Ciphertext>> group_acc(groups);

  auto accumulate = [&](std::optional<bfv::Ciphertext>& acc, bfv::Ciphertext v,
                        std::uint64_t& counter) {
    if (acc) {
      acc = eval.add(*acc, v);
      ++counter;
    } else {
      acc = std::move(v);
    }
  };

  if (!dedup) {
    for (int co = 0; co < p.spec.c_o; ++co) {
      std::optional<bfv::Ciphertext> chan;
      for (std::size_t i = 0; i < p.terms.size(); ++i) {
        const auto& t = p.terms[i];
        if (t.co != co || t.skip) continue;
        bfv::Ciphertext v = eval.mul_plain(inputs[p.in_layout.ct_of(t.ci)], p.masks[i]);
        ++res.ops.pmult;
        if (t.offset != 0) {
          v = eval.rotate(v, t.offset, keys);
          ++res.ops.autom;
        }
        accumulate(chan, std::move(v), res.ops.add);
      }
      if (chan) accumulate(group_acc[p.out_layout.ct_of(co)], std::move(*chan), res.ops.merge_add);
    }
  } else {
    // Products that share a group and an offset are summed, then rotated once.
    for (int g = 0; g < groups; ++g) {
      std::map<std::int64_t, bfv::Ciphertext> by_offset;
      for (std::size_t i = 0; i < p.terms.size(); ++i) {
        const auto& t = p.terms[i];
        if (t.skip || p.out_layout.ct_of(t.co) != g) continue;
        bfv::Ciphertext v = eval.mul_plain(inputs[p.in_layout.ct_of(t.ci)], p.masks[i]);
        ++res.ops.pmult;
        auto it = by_offset.find(t.offset);
        if (it == by_offset.end()) {
          by_offset.emplace(t.offset, std::move(v));
        } else {
          it->second = eval.add(it->second, v);
          ++res.ops.add;
        }
      }
      for (auto& [offset, v] : by_offset) {
        bfv::Ciphertext r = offset == 0 ? v : eval.rotate(v, offset, keys);
        if (offset != 0) ++res.ops.autom;
        accumulate(group_acc[g], std::move(r), res.ops.merge_add);
      }
    }
  }
  for (auto& acc : group_acc) {
    res.outputs.push_back(acc ? std::move(*acc) : bfv::zero_ciphertext(eval.context(), owner));
  }
  return res;
}

std::vector<std::uint64_t> extract_conv_output(const std::vector<SlotVector>& slots,
                                               const ConvSpec& spec, const PackedLayout& out_layout) {
  if (slots.size() != static_cast<std::size_t>(out_layout.num_cts())) {
    throw ParameterError("extract_conv_output: ciphertext count does not match layout");
  }
  const int ow = spec.out_w();
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(spec.c_o) * ow * ow);
  for (int co = 0; co < spec.c_o; ++co) {
    for (int y = 0; y < ow; ++y) {
      for (int x = 0; x < ow; ++x) {
        out.push_back(slots[out_layout.ct_of(co)].values[out_layout.slot(co, spec.anchor(y), spec.anchor(x))]);
      }
    }
  }
  return out;
}

}  // namespace trident::linear
