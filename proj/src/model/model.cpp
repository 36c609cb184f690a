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

#include "trident/model/model.hpp"

#include <sodium.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trident/common/bytes.hpp"
#include "trident/common/error.hpp"
#include "trident/ring/params.hpp"
#include "trident/ring/sampling.hpp"

namespace trident::model {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

ParameterError layer_error(std::size_t i, const std::string& what) {
  return ParameterError("layer " + std::to_string(i) + ": " + what);
}

std::string to_base64(std::span<const std::int64_t> w) {
  ByteWriter b;
  for (auto v : w) b.u32(static_cast<std::uint32_t>(static_cast<std::int32_t>(v)));
  const Bytes& raw = b.view();
  std::string out(sodium_base64_encoded_len(raw.size(), sodium_base64_VARIANT_ORIGINAL), '\0');
  sodium_bin2base64(out.data(), out.size(), raw.data(), raw.size(), sodium_base64_VARIANT_ORIGINAL);
  out.pop_back();  // trailing NUL
  return out;
}

std::vector<std::int64_t> from_base64(const std::string& s, std::size_t i) {
  Bytes raw(s.size());
  std::size_t len = 0;
  if (sodium_base642bin(raw.data(), raw.size(), s.data(), s.size(), nullptr, &len, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      len % 4 != 0) {
    throw layer_error(i, "weights are not valid base64 int32 data");
  }
  ByteReader r{std::span<const std::uint8_t>(raw).first(len)};
  std::vector<std::int64_t> out(len / 4);
  for (auto& v : out) v = static_cast<std::int32_t>(r.u32());
  return out;
}

linear::Padding parse_padding(const std::string& s, std::size_t i) {
  if (s == "same") return linear::Padding::kSame;
  if (s == "valid") return linear::Padding::kValid;
  throw layer_error(i, "unknown padding '" + s + "'");
}

std::int64_t floor_shift(std::int64_t v, int f) { return v >> f; }  // arithmetic on int64

// Exact conv in Z over a (c_i, w, w) map.
std::vector<std::int64_t> conv_z(const linear::ConvSpec& s, std::span<const std::int64_t> w,
                                 std::span<const std::int64_t> x) {
  const int ow = s.out_w();
  std::vector<std::int64_t> out(static_cast<std::size_t>(s.c_o) * ow * ow, 0);
  for (int co = 0; co < s.c_o; ++co) {
    for (int oy = 0; oy < ow; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        std::int64_t acc = 0;
        for (int ci = 0; ci < s.c_i; ++ci) {
          for (int ky = 0; ky < s.f_w; ++ky) {
            for (int kx = 0; kx < s.f_w; ++kx) {
              const int iy = s.anchor(oy) + ky - s.half();
              const int ix = s.anchor(ox) + kx - s.half();
              if (iy < 0 || iy >= s.w || ix < 0 || ix >= s.w) continue;
              acc += w[s.kernel_index(co, ci, ky, kx)] *
                     x[(static_cast<std::size_t>(ci) * s.w + iy) * s.w + ix];
            }
          }
        }
        out[(static_cast<std::size_t>(co) * ow + oy) * ow + ox] = acc;
      }
    }
  }
  return out;
}

std::vector<std::int64_t> fc_z(std::span<const std::int64_t> w, int n_o, int n_i,
                               std::span<const std::int64_t> x) {
  std::vector<std::int64_t> out(n_o, 0);
  for (int o = 0; o < n_o; ++o) {
    for (int i = 0; i < n_i; ++i) out[o] += w[static_cast<std::size_t>(o) * n_i + i] * x[i];
  }
  return out;
}

std::vector<std::int64_t> linear_z(const ModelSpec& m, const Stage& st, std::span<const std::int64_t> x) {
  const auto& w = m.layers[st.layer].weights;
  return st.kind == LayerKind::kConv ? conv_z(st.conv, w, x) : fc_z(w, st.n_o, st.n_i, x);
}

// Activation group, then shift; `bump` adds the truncation error edge.
std::vector<std::int64_t> activate(const Stage& st, std::span<const std::int64_t> x, std::int64_t bump) {
  if (st.act == Activation::kNone) return {x.begin(), x.end()};
  const bool relu = st.act == Activation::kRelu || st.act == Activation::kReluMaxPool;
  const bool pool = st.act == Activation::kMaxPool || st.act == Activation::kReluMaxPool;
  std::vector<std::int64_t> out;
  if (!pool) {
    for (auto v : x) out.push_back(std::max<std::int64_t>(floor_shift(v, st.shift) + bump, 0));
    return out;
  }
  const int w = st.linear_out.width, ow = st.out.width, k = st.pool;
  for (int c = 0; c < st.linear_out.channels; ++c) {
    for (int oy = 0; oy < ow; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        std::int64_t best = INT64_MIN;
        for (int dy = 0; dy < k; ++dy) {
          for (int dx = 0; dx < k; ++dx) {
            const auto v = x[(static_cast<std::size_t>(c) * w + oy * k + dy) * w + ox * k + dx];
            best = std::max(best, floor_shift(v, st.shift) + bump);
          }
        }
        out.push_back(relu ? std::max<std::int64_t>(best, 0) : best);
      }
    }
  }
  return out;
}

// Interval image of a linear stage.
void linear_band(const ModelSpec& m, const Stage& st, std::span<const std::int64_t> lo,
                 std::span<const std::int64_t> hi, std::vector<std::int64_t>& out_lo,
                 std::vector<std::int64_t>& out_hi) {
  const auto& w = m.layers[st.layer].weights;
  std::vector<std::int64_t> wp(w.size()), wn(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp[i] = std::max<std::int64_t>(w[i], 0);
    wn[i] = std::min<std::int64_t>(w[i], 0);
  }
  auto apply = [&](const std::vector<std::int64_t>& ww, std::span<const std::int64_t> v) {
    return st.kind == LayerKind::kConv ? conv_z(st.conv, ww, v) : fc_z(ww, st.n_o, st.n_i, v);
  };
  const auto a = apply(wp, lo), b = apply(wn, hi), c = apply(wp, hi), d = apply(wn, lo);
  out_lo.resize(a.size());
  out_hi.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out_lo[i] = a[i] + b[i];
    out_hi[i] = c[i] + d[i];
  }
}

}  // namespace

const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kFc: return "fc";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kMaxPool: return "maxpool";
  }
  return "?";
}

LayerKind parse_layer_kind(const std::string& s) {
  if (s == "conv") return LayerKind::kConv;
  if (s == "fc") return LayerKind::kFc;
  if (s == "relu") return LayerKind::kRelu;
  if (s == "maxpool") return LayerKind::kMaxPool;
  throw ParameterError("unknown layer kind '" + s + "'");
}

double LayerSpec::sparsity() const {
  if (weights.empty()) return 0;
  const auto zeros = std::count(weights.begin(), weights.end(), 0);
  return static_cast<double>(zeros) / static_cast<double>(weights.size());
}

std::vector<std::string> ModelSpec::validate(std::uint64_t t) const {
  std::vector<std::string> warnings;
  if (input.channels <= 0 || input.width <= 0) throw ParameterError("model: input shape must be positive");
  if (layers.empty()) throw ParameterError("model: no layers");
  if (!layers.back().is_linear()) {
    throw layer_error(layers.size() - 1, "the last layer must be conv or fc");
  }
  if (value_bits < 0 || value_bits > 62) throw ParameterError("model: value_bits out of range");
  const int t_bits = std::bit_width(t - 1);
  TensorShape cur = input;
  bool flat = input.width == 1 && input.channels > 1;
  bool saw_relu = false, saw_pool = false;
  int last_linear = -1;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    if (l.is_linear()) {
      saw_relu = saw_pool = false;
      last_linear = static_cast<int>(i);
      if (l.shift < 0 || l.shift >= t_bits) throw layer_error(i, "shift out of range");
      if (i + 1 == layers.size() && l.shift != 0) {
        throw layer_error(i, "the output layer cannot carry a shift");
      }
      std::size_t expect = 0;
      if (l.kind == LayerKind::kConv) {
        if (flat) throw layer_error(i, "conv cannot follow an fc layer");
        linear::ConvSpec cs{cur.channels, l.out_channels, l.kernel, cur.width, l.stride, l.padding};
        try {
          cs.validate();
        } catch (const ParameterError& e) {
          throw layer_error(i, e.what());
        }
        expect = cs.kernel_size();
        cur = {l.out_channels, cs.out_w()};
      } else {
        if (l.out_features <= 0) throw layer_error(i, "fc needs out_features > 0");
        expect = cur.size() * static_cast<std::size_t>(l.out_features);
        cur = {l.out_features, 1};
        flat = true;
      }
      if (l.weights.size() != expect) {
        throw layer_error(i, "expected " + std::to_string(expect) + " weights, found " +
                                 std::to_string(l.weights.size()));
      }
      for (auto w : l.weights) {
        if (2 * w <= -static_cast<std::int64_t>(t) || 2 * w > static_cast<std::int64_t>(t)) {
          throw layer_error(i, "weight " + std::to_string(w) + " outside the centered range of Z_t");
        }
      }
      if (l.declared_sparsity && std::abs(*l.declared_sparsity - l.sparsity()) > 1e-3) {
        warnings.push_back("layer " + std::to_string(i) + ": declared sparsity " +
                           std::to_string(*l.declared_sparsity) + " differs from realized " +
                           std::to_string(l.sparsity()));
      }
      continue;
    }
    if (last_linear < 0) throw layer_error(i, "activation before any linear layer");
    if (l.kind == LayerKind::kRelu) {
      if (saw_relu) throw layer_error(i, "repeated relu in one activation group");
      saw_relu = true;
    } else {
      if (saw_pool) throw layer_error(i, "repeated maxpool in one activation group");
      if (flat) throw layer_error(i, "maxpool needs a feature map");
      if (l.pool < 2 || cur.width % l.pool != 0) {
        throw layer_error(i, "pool size must divide the width " + std::to_string(cur.width));
      }
      saw_pool = true;
      cur.width /= l.pool;
    }
  }
  return warnings;
}

std::vector<Stage> ModelSpec::stages() const {
  std::vector<Stage> out;
  TensorShape cur = input;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    if (l.is_linear()) {
      Stage s;
      s.layer = i;
      s.kind = l.kind;
      s.shift = l.shift;
      s.in = cur;
      if (l.kind == LayerKind::kConv) {
        s.conv = {cur.channels, l.out_channels, l.kernel, cur.width, l.stride, l.padding};
        cur = {l.out_channels, s.conv.out_w()};
      } else {
        s.n_i = static_cast<int>(cur.size());
        s.n_o = l.out_features;
        cur = {l.out_features, 1};
      }
      s.linear_out = cur;
      s.out = cur;
      out.push_back(s);
      continue;
    }
    Stage& s = out.back();
    if (l.kind == LayerKind::kRelu) {
      s.act = s.act == Activation::kMaxPool ? Activation::kReluMaxPool : Activation::kRelu;
    } else {
      s.act = s.act == Activation::kRelu ? Activation::kReluMaxPool : Activation::kMaxPool;
      s.pool = l.pool;
      cur.width /= l.pool;
      s.out = cur;
    }
  }
  return out;
}

std::size_t ModelSpec::depth() const {
  return static_cast<std::size_t>(
      std::count_if(layers.begin(), layers.end(), [](const LayerSpec& l) { return l.is_linear(); }));
}

TensorShape ModelSpec::output_shape() const { return stages().back().out; }

std::string save_model(const ModelSpec& m) {
  json doc;
  doc["format"] = "trident-model";
  doc["version"] = kFormatVersion;
  doc["name"] = m.name;
  doc["preset"] = m.preset;
  doc["input"] = {{"channels", m.input.channels}, {"width", m.input.width}};
  doc["value_bits"] = m.value_bits;
  json layers = json::array();
  for (const auto& l : m.layers) {
    json j;
    j["kind"] = to_string(l.kind);
    switch (l.kind) {
      case LayerKind::kConv:
        j["out_channels"] = l.out_channels;
        j["kernel"] = l.kernel;
        j["stride"] = l.stride;
        j["padding"] = l.padding == linear::Padding::kSame ? "same" : "valid";
        break;
      case LayerKind::kFc:
        j["out_features"] = l.out_features;
        break;
      case LayerKind::kMaxPool:
        j["size"] = l.pool;
        break;
      case LayerKind::kRelu:
        break;
    }
    if (l.is_linear()) {
      j["shift"] = l.shift;
      j["sparsity"] = std::round(l.sparsity() * 1e6) / 1e6;
      j["weights"] = to_base64(l.weights);
    }
    layers.push_back(std::move(j));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

ModelSpec load_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("model: malformed document: ") + e.what());
  }
  ModelSpec m;
  std::size_t i = 0;
  try {
    if (doc.value("format", "") != "trident-model") throw ParameterError("model: not a trident model");
    if (doc.value("version", 0) != kFormatVersion) throw ParameterError("model: unsupported version");
    m.name = doc.value("name", "");
    m.preset = doc.value("preset", "toy");
    m.input.channels = doc.at("input").at("channels").get<int>();
    m.input.width = doc.at("input").at("width").get<int>();
    m.value_bits = doc.value("value_bits", 0);
    for (const auto& j : doc.at("layers")) {
      LayerSpec l;
      try {
        l.kind = parse_layer_kind(j.at("kind").get<std::string>());
      } catch (const ParameterError& e) {
        throw layer_error(i, e.what());
      }
      switch (l.kind) {
        case LayerKind::kConv:
          l.out_channels = j.at("out_channels").get<int>();
          l.kernel = j.value("kernel", 3);
          l.stride = j.value("stride", 1);
          l.padding = parse_padding(j.value("padding", "same"), i);
          break;
        case LayerKind::kFc:
          l.out_features = j.at("out_features").get<int>();
          break;
        case LayerKind::kMaxPool:
          l.pool = j.value("size", 2);
          break;
        case LayerKind::kRelu:
          break;
      }
      if (l.is_linear()) {
        l.shift = j.value("shift", 0);
        if (j.contains("sparsity")) l.declared_sparsity = j.at("sparsity").get<double>();
        l.weights = from_base64(j.at("weights").get<std::string>(), i);
      }
      m.layers.push_back(std::move(l));
      ++i;
    }
  } catch (const json::exception& e) {
    throw ParameterError("model: layer " + std::to_string(i) + ": " + e.what());
  }
  m.validate(RingParams::preset(m.preset).t);
  return m;
}

ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

void save_model_file(const ModelSpec& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write model file " + path);
  out << save_model(m);
}

std::string model_checksum(const ModelSpec& m) {
  const std::string doc = save_model(m);
  std::uint8_t h[32];
  crypto_generichash(h, sizeof h, reinterpret_cast<const std::uint8_t*>(doc.data()), doc.size(), nullptr, 0);
  char hex[65];
  sodium_bin2hex(hex, sizeof hex, h, sizeof h);
  return hex;
}

Quantized quantize(std::span<const double> w, int f, std::uint64_t t) {
  const auto lim = static_cast<std::int64_t>((t - 1) / 2);
  Quantized q;
  q.values.reserve(w.size());
  for (double v : w) {
    const double r = std::nearbyint(std::ldexp(v, f));
    std::int64_t x;
    if (!(r >= static_cast<double>(-lim))) {
      x = -lim;
      ++q.clamped;
    } else if (r > static_cast<double>(lim)) {
      x = lim;
      ++q.clamped;
    } else {
      x = static_cast<std::int64_t>(r);
    }
    q.values.push_back(x);
  }
  return q;
}

std::vector<double> dequantize(std::span<const std::int64_t> q, int f) {
  std::vector<double> out;
  out.reserve(q.size());
  for (auto v : q) out.push_back(std::ldexp(static_cast<double>(v), -f));
  return out;
}

Generated gen_random_model(const ModelSpec& skeleton, double alpha, std::uint64_t seed, int weight_bound) {
  if (alpha < 0 || alpha > 1) throw ParameterError("sparsity must be in [0, 1]");
  if (weight_bound < 1) throw ParameterError("weight bound must be positive");
  Generated g{skeleton, 0};
  Prng prng(seed, "model-weights");
  const std::uint64_t threshold =
      alpha >= 1 ? UINT64_MAX : static_cast<std::uint64_t>(std::ldexp(alpha, 64));
  std::size_t conv_total = 0, conv_zero = 0;
  TensorShape cur = skeleton.input;
  for (auto& l : g.model.layers) {
    if (!l.is_linear()) {
      if (l.kind == LayerKind::kMaxPool) cur.width /= l.pool;
      continue;
    }
    std::size_t count;
    if (l.kind == LayerKind::kConv) {
      linear::ConvSpec cs{cur.channels, l.out_channels, l.kernel, cur.width, l.stride, l.padding};
      count = cs.kernel_size();
      cur = {l.out_channels, cs.out_w()};
    } else {
      count = cur.size() * static_cast<std::size_t>(l.out_features);
      cur = {l.out_features, 1};
    }
    l.weights.resize(count);
    for (auto& w : l.weights) {
      const auto mag = static_cast<std::int64_t>(prng.uniform_below(weight_bound)) + 1;
      w = prng.next_bit() ? mag : -mag;
      if (l.kind == LayerKind::kConv) {
        const bool zero = alpha >= 1 || prng.next_u64() < threshold;
        if (zero) w = 0;
        ++conv_total;
        conv_zero += zero;
      }
    }
    l.declared_sparsity.reset();
  }
  g.realized_sparsity = conv_total ? static_cast<double>(conv_zero) / conv_total : 0;
  return g;
}

ModelSpec tiny_cnn_skeleton(int width, int c_o, int classes, int depth, int shift) {
  if (depth != 2 && depth != 4) throw ParameterError("tiny cnn: depth must be 2 or 4");
  ModelSpec m;
  m.name = "tiny-cnn-d" + std::to_string(depth);
  m.input = {1, width};
  auto conv = [&](int co) {
    LayerSpec l;
    l.kind = LayerKind::kConv;
    l.out_channels = co;
    l.shift = shift;
    return l;
  };
  auto act = [](LayerKind k) {
    LayerSpec l;
    l.kind = k;
    return l;
  };
  auto fc = [&](int n, int s) {
    LayerSpec l;
    l.kind = LayerKind::kFc;
    l.out_features = n;
    l.shift = s;
    return l;
  };
  m.layers.push_back(conv(c_o));
  m.layers.push_back(act(LayerKind::kRelu));
  if (depth == 4) {
    m.layers.push_back(conv(c_o));
    m.layers.push_back(act(LayerKind::kRelu));
  }
  m.layers.push_back(act(LayerKind::kMaxPool));
  if (depth == 4) {
    m.layers.push_back(fc(16, shift));
    m.layers.push_back(act(LayerKind::kRelu));
  }
  m.layers.push_back(fc(classes, 0));
  return m;
}

std::vector<std::int64_t> reference_inference(const ModelSpec& m, std::span<const std::int64_t> image,
                                              Trace* trace) {
  if (image.empty()) throw ParameterError("reference: empty input");
  if (image.size() != m.input.size()) throw ParameterError("reference: input size mismatch");
  std::vector<std::int64_t> x(image.begin(), image.end());
  for (const auto& st : m.stages()) {
    const auto y = linear_z(m, st, x);
    if (trace) trace->linear_outputs.push_back(y);
    x = activate(st, y, 0);
  }
  if (trace) trace->logits = x;
  return x;
}

bool Band::contains(std::span<const std::int64_t> v) const {
  if (v.size() != lo.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < lo[i] || v[i] > hi[i]) return false;
  }
  return true;
}

namespace {

Band run_band(const ModelSpec& m, std::span<const std::int64_t> image, std::vector<std::int64_t>* peak) {
  if (image.size() != m.input.size()) throw ParameterError("reference: input size mismatch");
  Band b{{image.begin(), image.end()}, {image.begin(), image.end()}};
  for (const auto& st : m.stages()) {
    std::vector<std::int64_t> lo, hi;
    linear_band(m, st, b.lo, b.hi, lo, hi);
    if (peak) {
      std::int64_t p = 0;
      for (std::size_t i = 0; i < lo.size(); ++i) p = std::max({p, std::abs(lo[i]), std::abs(hi[i])});
      peak->push_back(p);
    }
    b.lo = activate(st, lo, 0);
    b.hi = activate(st, hi, st.act == Activation::kNone ? 0 : 1);
  }
  return b;
}

}  // namespace

Band reference_band(const ModelSpec& m, std::span<const std::int64_t> image) {
  return run_band(m, image, nullptr);
}

std::int64_t max_linear_magnitude(const ModelSpec& m, const std::vector<std::vector<std::int64_t>>& images) {
  std::int64_t best = 0;
  const auto st = m.stages();
  for (const auto& img : images) {
    std::vector<std::int64_t> peak;
    run_band(m, img, &peak);
    for (std::size_t s = 0; s < peak.size(); ++s) {
      if (st[s].act != Activation::kNone) best = std::max(best, peak[s]);
    }
  }
  return best;
}

void certify_bound(const ModelSpec& m, const std::vector<std::vector<std::int64_t>>& images, int value_bits,
                   std::uint64_t t) {
  if (value_bits < 2 || value_bits > 62) throw ParameterError("value_bits must be in [2, 62]");
  const std::int64_t limit = std::int64_t{1} << (value_bits - 1);
  const auto st = m.stages();
  for (std::size_t k = 0; k < images.size(); ++k) {
    std::vector<std::int64_t> peak;
    run_band(m, images[k], &peak);
    for (std::size_t s = 0; s < peak.size(); ++s) {
      const bool masked = st[s].act != Activation::kNone;
      const bool over = masked ? peak[s] >= limit : 2 * peak[s] >= static_cast<std::int64_t>(t);
      if (over) {
        throw ParameterError("stage " + std::to_string(s) + " (layer " + std::to_string(st[s].layer) +
                             "): |x| reaches " + std::to_string(peak[s]) + " on input " + std::to_string(k) +
                             (masked ? ", above the 2^" + std::to_string(value_bits - 1) + " bound"
                                     : ", beyond the centered range of Z_t"));
      }
    }
  }
}

Calibration load_calibration(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open input file " + path);
  const Bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ByteReader r(raw);
  if (r.u32() != 0x4c414354) throw ParameterError(path + ": not a calibration file");
  if (r.u32() != 1) throw ParameterError(path + ": unsupported calibration version");
  Calibration c;
  const auto count = r.u32();
  c.shape.channels = static_cast<int>(r.u32());
  c.shape.width = static_cast<int>(r.u32());
  if (c.shape.channels <= 0 || c.shape.width <= 0) throw ParameterError(path + ": bad shape");
  if (std::uint64_t{count} * c.shape.size() * 4 != r.remaining()) {
    throw ParameterError(path + ": size does not match the header");
  }
  for (std::uint32_t k = 0; k < count; ++k) {
    std::vector<std::int64_t> img(c.shape.size());
    for (auto& v : img) v = static_cast<std::int32_t>(r.u32());
    c.images.push_back(std::move(img));
  }
  return c;
}

void save_calibration(const Calibration& c, const std::string& path) {
  ByteWriter w;
  w.u32(0x4c414354);  // "TCAL"
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(c.images.size()));
  w.u32(static_cast<std::uint32_t>(c.shape.channels));
  w.u32(static_cast<std::uint32_t>(c.shape.width));
  for (const auto& img : c.images) {
    if (img.size() != c.shape.size()) throw ParameterError("calibration: tensor size mismatch");
    for (auto v : img) w.u32(static_cast<std::uint32_t>(static_cast<std::int32_t>(v)));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(w.view().data()), static_cast<std::streamsize>(w.size()));
}

Calibration random_inputs(const TensorShape& shape, std::size_t count, std::int64_t lo, std::int64_t hi,
                          std::uint64_t seed) {
  if (hi < lo) throw ParameterError("random inputs: empty range");
  Prng prng(seed, "model-inputs");
  Calibration c{shape, {}};
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<std::int64_t> img(shape.size());
    for (auto& v : img) v = lo + static_cast<std::int64_t>(prng.uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
    c.images.push_back(std::move(img));
  }
  return c;
}

std::size_t argmax(std::span<const std::int64_t> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace trident::model
