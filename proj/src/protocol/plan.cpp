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

#include "trident/protocol/plan.hpp"

#include <algorithm>

#include "trident/common/error.hpp"
#include "trident/linear/conv.hpp"

namespace trident::protocol {

namespace {

ParameterError stage_error(std::size_t s, const model::Stage& st, const std::string& what) {
  return ParameterError("stage " + std::to_string(s) + " (layer " + std::to_string(st.layer) + "): " + what);
}

// Every offset a conv term could need, independent of the weights.
std::set<std::int64_t> conv_steps(const linear::ConvSpec& spec, const linear::PackedLayout& l) {
  std::set<std::int64_t> out;
  for (int co = 0; co < spec.c_o; ++co) {
    for (int ci = 0; ci < spec.c_i; ++ci) {
      for (int dy = -spec.half(); dy <= spec.half(); ++dy) {
        for (int dx = -spec.half(); dx <= spec.half(); ++dx) {
          const std::int64_t off =
              (static_cast<std::int64_t>(l.local(ci)) - l.local(co)) * static_cast<std::int64_t>(l.plane()) +
              static_cast<std::int64_t>(dy) * spec.w + dx;
          if (off != 0) out.insert(off);
        }
      }
    }
  }
  return out;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> StagePlan::output_mask_range() const {
  if (gc.mode == gc::GcMode::kModT) return {0, gc.t};
  // y + s_y must stay inside [0, 2^out).
  const std::uint64_t lo = relu ? 0 : y_bound;
  const std::uint64_t top = 1ULL << gc.out_bits;
  return {lo, top > y_bound ? top - y_bound : 0};
}

std::set<std::int64_t> SessionPlan::client_steps() const { return stages.front().steps; }

std::set<std::int64_t> SessionPlan::proxy_steps() const {
  std::set<std::int64_t> out;
  for (std::size_t s = 1; s < stages.size(); ++s) out.insert(stages[s].steps.begin(), stages[s].steps.end());
  return out;
}

std::vector<noise::LinearShape> SessionPlan::network() const {
  std::vector<noise::LinearShape> net;
  for (const auto& sp : stages) {
    noise::LinearShape ls;
    ls.name = std::string(model::to_string(sp.stage.kind)) + std::to_string(sp.stage.layer);
    if (sp.conv) {
      ls.kind = noise::LinearShape::Kind::kConv;
      ls.c_i = sp.stage.conv.c_i;
      ls.f_w = sp.stage.conv.f_w;
      ls.c_o_per_ct = std::min(sp.out_layout.per_ct, sp.stage.conv.c_o);
    } else {
      ls.kind = noise::LinearShape::Kind::kFc;
      ls.diagonals = sp.fc_period;
    }
    net.push_back(ls);
  }
  return net;
}

std::shared_ptr<const SessionPlan> make_plan(const model::ModelSpec& m, const ProtocolConfig& cfg) {
  auto plan = std::make_shared<SessionPlan>();
  plan->cfg = cfg;
  const RingParams& rp = cfg.params;
  rp.validate();
  plan->warnings = m.validate(rp.t);
  plan->ctx = bfv::Context::create(rp);
  const std::size_t row = rp.row_size();
  const int t_bits = rp.t_bits();

  const int value_bits = cfg.value_bits ? cfg.value_bits : m.value_bits;
  plan->mask = MaskPlan::make(cfg.gc_mode, rp.t, value_bits, cfg.lambda);
  if (!plan->mask.warning.empty()) plan->warnings.push_back(plan->mask.warning);
  if (cfg.gc_mode == gc::GcMode::kTruncated && value_bits > t_bits - 1) {
    throw ParameterError("value bound 2^" + std::to_string(value_bits - 1) + " does not fit the plaintext modulus");
  }

  const auto stages = m.stages();
  for (std::size_t s = 0; s < stages.size(); ++s) {
    StagePlan sp;
    sp.stage = stages[s];
    const auto& st = sp.stage;
    try {
      if (st.kind == model::LayerKind::kConv) {
        sp.conv = true;
        sp.in_layout = linear::PackedLayout::make(st.conv.c_i, st.conv.w, row);
        sp.out_layout = linear::PackedLayout::make(st.conv.c_o, st.conv.w, row);
        sp.steps = conv_steps(st.conv, sp.in_layout);
      } else {
        sp.fc_period = std::max(linear::next_pow2(st.n_i), linear::next_pow2(st.n_o));
        if (sp.fc_period > row) {
          throw ParameterError("fc period " + std::to_string(sp.fc_period) + " exceeds the row size " +
                               std::to_string(row));
        }
        for (std::size_t d = 1; d < sp.fc_period; ++d) sp.steps.insert(static_cast<std::int64_t>(d));
      }
    } catch (const ParameterError& e) {
      throw stage_error(s, st, e.what());
    }

    sp.has_activation = st.act != model::Activation::kNone;
    if (sp.has_activation) {
      sp.relu = st.act == model::Activation::kRelu || st.act == model::Activation::kReluMaxPool;
      const bool pool = st.act == model::Activation::kMaxPool || st.act == model::Activation::kReluMaxPool;
      if (cfg.gc_mode == gc::GcMode::kTruncated) {
        if (st.shift < 1) throw stage_error(s, st, "truncated mode needs a shift of at least 1");
        sp.gc = gc::GcConfig::truncated(t_bits, st.shift, t_bits - 1);
        const int mb = plan->mask.value_bits - 1 - st.shift;
        sp.y_bound = 1ULL << std::max(mb, 0);
        if (sp.y_bound >= (1ULL << (sp.gc.b - 1))) throw stage_error(s, st, "value bound exceeds the circuit width");
        const auto [lo, hi] = sp.output_mask_range();
        if (hi < lo + 2) throw stage_error(s, st, "no room for the output mask; raise the shift");
      } else {
        sp.gc = gc::GcConfig::mod_t(rp.t, st.shift);
      }
      if (pool) {
        sp.window = st.pool * st.pool;
        const int w = st.linear_out.width, ow = st.out.width, k = st.pool;
        for (int c = 0; c < st.linear_out.channels; ++c) {
          for (int oy = 0; oy < ow; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
              for (int dy = 0; dy < k; ++dy) {
                for (int dx = 0; dx < k; ++dx) {
                  sp.gather.push_back(static_cast<std::uint32_t>((c * w + oy * k + dy) * w + ox * k + dx));
                }
              }
            }
          }
        }
        sp.circuit = gc::build_maxpool(sp.gc, sp.window, sp.relu);
      } else {
        sp.window = 1;
        for (std::size_t i = 0; i < st.linear_out.size(); ++i) sp.gather.push_back(static_cast<std::uint32_t>(i));
        sp.circuit = gc::build_relu(sp.gc);
      }
    }
    plan->stages.push_back(std::move(sp));
  }

  // Later stages take fresh proxy ciphertexts, so only their input shape matters.
  for (std::size_t s = 1; s < plan->stages.size(); ++s) {
    if (plan->stages[s].conv && plan->stages[s].in_layout.num_cts() < 1) {
      throw stage_error(s, plan->stages[s].stage, "empty input layout");
    }
  }

  if (cfg.w_A && cfg.w_SW) {
    const auto np = noise::NoiseParams::make(rp, cfg.w_A, cfg.w_SW, cfg.key_mode);
    plan->bases = {np.w_A, np.l_A, np.w_SW, np.l_SW};
  } else {
    plan->bases = noise::select_bases(rp, plan->network(), cfg.margin_bits, noise::Variant::kImpala, cfg.key_mode);
    if (cfg.w_A) {
      const auto np = noise::NoiseParams::make(rp, cfg.w_A, plan->bases.w_SW, cfg.key_mode);
      plan->bases.w_A = np.w_A;
      plan->bases.l_A = np.l_A;
    }
    if (cfg.w_SW) {
      const auto np = noise::NoiseParams::make(rp, plan->bases.w_A, cfg.w_SW, cfg.key_mode);
      plan->bases.w_SW = np.w_SW;
      plan->bases.l_SW = np.l_SW;
    }
  }
  const auto np = noise::NoiseParams::make(rp, plan->bases.w_A, plan->bases.w_SW, cfg.key_mode);
  for (const auto& row : noise::noise_report(np, plan->network())) {
    if (row.budget_remaining_bits <= 0) {
      plan->warnings.push_back("stage " + std::to_string(row.layer) + ": estimated noise exceeds the budget by " +
                               std::to_string(-row.budget_remaining_bits) + " bits");
    }
  }
  return plan;
}

std::vector<SlotVector> pack_stage_input(const SessionPlan& plan, std::size_t s,
                                         std::span<const std::uint64_t> values) {
  const StagePlan& sp = plan.stages.at(s);
  const std::size_t n = plan.cfg.params.n;
  if (values.empty()) throw ParameterError("empty input");
  if (values.size() != sp.stage.in.size()) {
    throw ParameterError("stage " + std::to_string(s) + ": expected " + std::to_string(sp.stage.in.size()) +
                         " input values, got " + std::to_string(values.size()));
  }
  if (sp.conv) return linear::pack_input(values, sp.in_layout, n);
  return {linear::pack_replicated(values, sp.fc_period, n)};
}

std::vector<std::uint64_t> extract_stage_output(const SessionPlan& plan, std::size_t s,
                                                const std::vector<SlotVector>& slots) {
  const StagePlan& sp = plan.stages.at(s);
  if (slots.size() != output_ciphertexts(plan, s)) throw ProtocolError("unexpected ciphertext count");
  if (sp.conv) return linear::extract_conv_output(slots, sp.stage.conv, sp.out_layout);
  return {slots[0].values.begin(), slots[0].values.begin() + sp.stage.n_o};
}

std::size_t output_ciphertexts(const SessionPlan& plan, std::size_t s) {
  const StagePlan& sp = plan.stages.at(s);
  return sp.conv ? static_cast<std::size_t>(sp.out_layout.num_cts()) : 1;
}

std::int64_t centered(std::uint64_t v, std::uint64_t t) {
  return 2 * v > t ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(t) : static_cast<std::int64_t>(v);
}

std::uint64_t to_residue(std::int64_t v, std::uint64_t t) {
  const auto tt = static_cast<std::int64_t>(t);
  return static_cast<std::uint64_t>(((v % tt) + tt) % tt);
}

}  // namespace trident::protocol
