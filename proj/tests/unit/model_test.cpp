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


#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "trident/common/error.hpp"
#include "trident/model/model.hpp"
#include "trident/ring/params.hpp"

namespace trident::model {
namespace {

const std::uint64_t kT = RingParams::toy().t;

LayerSpec Conv(int co, std::vector<std::int64_t> w, int k = 3, int shift = 0) {
  LayerSpec l;
  l.kind = LayerKind::kConv;
  l.out_channels = co;
  l.kernel = k;
  l.shift = shift;
  l.weights = std::move(w);
  return l;
}

LayerSpec Fc(int n, std::vector<std::int64_t> w, int shift = 0) {
  LayerSpec l;
  l.kind = LayerKind::kFc;
  l.out_features = n;
  l.shift = shift;
  l.weights = std::move(w);
  return l;
}

LayerSpec Act(LayerKind k, int pool = 2) {
  LayerSpec l;
  l.kind = k;
  l.pool = pool;
  return l;
}

void ExpectLayerError(const ModelSpec& m, const std::string& needle) {
  try {
    m.validate(kT);
    FAIL() << "no error";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(ModelIoTest, MinimalConvRoundtrip) {
  ModelSpec m;
  m.name = "one-conv";
  m.input = {2, 5};
  m.value_bits = 12;
  std::vector<std::int64_t> w(3 * 2 * 9);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<std::int64_t>(i % 7) - 3;
  m.layers.push_back(Conv(3, w));
  const std::string doc = save_model(m);
  const ModelSpec back = load_model(doc);
  EXPECT_EQ(back.layers.size(), 1u);
  EXPECT_EQ(back.layers[0].weights, w);
  EXPECT_EQ(back.input, m.input);
  EXPECT_EQ(back.value_bits, 12);
  EXPECT_EQ(save_model(back), doc);
  EXPECT_EQ(model_checksum(back), model_checksum(m));
}

TEST(ModelIoTest, WeightRange) {
  ModelSpec m;
  m.input = {1, 1};
  const auto half = static_cast<std::int64_t>((kT - 1) / 2);
  m.layers.push_back(Fc(3, {half, -half, 0}));
  EXPECT_NO_THROW(m.validate(kT));
  m.layers[0].weights[2] = static_cast<std::int64_t>(kT);
  ExpectLayerError(m, "layer 0");
  m.layers[0].weights[2] = -half - 1;
  ExpectLayerError(m, "centered range");
}

TEST(ModelIoTest, StructuralErrorsNameTheLayer) {
  ModelSpec m;
  m.input = {1, 4};
  m.layers = {Conv(2, std::vector<std::int64_t>(17)), Act(LayerKind::kRelu), Fc(2, std::vector<std::int64_t>(64))};
  ExpectLayerError(m, "layer 0: expected 18 weights");

  m.layers[0].weights.resize(18);
  EXPECT_NO_THROW(m.validate(kT));
  m.layers.insert(m.layers.begin() + 2, Act(LayerKind::kMaxPool, 3));
  ExpectLayerError(m, "layer 2: pool size");

  m.layers[2].pool = 2;
  m.layers[3].weights.resize(16);
  EXPECT_NO_THROW(m.validate(kT));
  m.layers.push_back(Act(LayerKind::kRelu));
  ExpectLayerError(m, "layer 4: the last layer");

  m.layers.pop_back();
  m.layers.push_back(Conv(1, std::vector<std::int64_t>(18)));
  ExpectLayerError(m, "layer 4: conv cannot follow");

  m.layers.pop_back();
  m.layers[3].shift = 2;
  ExpectLayerError(m, "layer 3: the output layer");

  m.layers[3].shift = 0;
  m.layers.insert(m.layers.begin(), Act(LayerKind::kRelu));
  ExpectLayerError(m, "layer 0: activation before");
}

TEST(ModelIoTest, DocumentErrors) {
  EXPECT_THROW(load_model("{not json"), ParameterError);
  ModelSpec m;
  m.input = {1, 1};
  m.layers = {Fc(1, {1})};
  std::string doc = save_model(m);
  const auto pos = doc.find("\"fc\"");
  doc.replace(pos, 4, "\"pool\"");
  try {
    load_model(doc);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 0"), std::string::npos) << e.what();
  }
}

TEST(ModelIoTest, SparsityMismatchWarns) {
  ModelSpec m;
  m.input = {1, 1};
  m.layers = {Fc(2, {0, 3})};
  m.layers[0].declared_sparsity = 0.25;
  const auto w = m.validate(kT);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("0.5"), std::string::npos);
}

TEST(QuantizeTest, Basics) {
  const std::vector<double> v{0.0, 1.0, -1.0, 2.5 / 256, 3.5 / 256, 1e9, -1e9};
  const auto q = quantize(v, 8, kT);
  EXPECT_EQ(q.values[0], 0);
  EXPECT_EQ(q.values[1], 256);
  EXPECT_EQ(q.values[2], -256);
  EXPECT_EQ(q.values[3], 2);  // ties to even
  EXPECT_EQ(q.values[4], 4);
  EXPECT_EQ(q.values[5], static_cast<std::int64_t>((kT - 1) / 2));
  EXPECT_EQ(q.values[6], -static_cast<std::int64_t>((kT - 1) / 2));
  EXPECT_EQ(q.clamped, 2u);
}

TEST(QuantizeTest, RoundingBound) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-20, 20);
  for (int f : {0, 3, 9}) {
    std::vector<double> v(5000);
    for (auto& x : v) x = d(rng);
    const auto q = quantize(v, f, kT);
    ASSERT_EQ(q.clamped, 0u);
    const auto back = dequantize(q.values, f);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_LE(std::abs(back[i] - v[i]), std::ldexp(1.0, -f - 1));
    }
  }
}

TEST(GenerateTest, SparsityExtremesAndStatistics) {
  const auto sk = tiny_cnn_skeleton(8, 16, 10, 2);
  const auto dense = gen_random_model(sk, 0.0, 1);
  EXPECT_EQ(dense.realized_sparsity, 0.0);
  for (const auto& l : dense.model.layers) {
    if (l.is_linear()) EXPECT_EQ(l.sparsity(), 0.0);
  }
  const auto empty = gen_random_model(sk, 1.0, 1);
  EXPECT_EQ(empty.realized_sparsity, 1.0);
  EXPECT_EQ(empty.model.layers[0].sparsity(), 1.0);

  const auto sk4 = tiny_cnn_skeleton(16, 16, 10, 4);
  const double alpha = 0.3;
  const auto g = gen_random_model(sk4, alpha, 7);
  const double n = 16 * 9 + 16 * 16 * 9;
  const double sigma = std::sqrt(alpha * (1 - alpha) / n);
  EXPECT_NEAR(g.realized_sparsity, alpha, 3 * sigma);
  EXPECT_NO_THROW(g.model.validate(kT));

  const auto again = gen_random_model(sk4, alpha, 7);
  EXPECT_EQ(model_checksum(again.model), model_checksum(g.model));
}

TEST(ReferenceTest, ZeroWeightsGiveZeroLogits) {
  auto g = gen_random_model(tiny_cnn_skeleton(), 1.0, 3);
  g.model.layers.back().weights.assign(g.model.layers.back().weights.size(), 0);
  const std::vector<std::int64_t> img(64, 9);
  EXPECT_EQ(reference_inference(g.model, img), std::vector<std::int64_t>(10, 0));
}

TEST(ReferenceTest, IdentityConvReluPassthrough) {
  ModelSpec m;
  m.input = {1, 4};
  m.layers = {Conv(1, {1}, 1, 2), Act(LayerKind::kRelu), Fc(16, {})};
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) m.layers[2].weights.push_back(i == j);
  }
  m.validate(kT);
  std::vector<std::int64_t> img(16);
  for (int i = 0; i < 16; ++i) img[i] = 5 * i;
  const auto out = reference_inference(m, img);
  for (int i = 0; i < 16; ++i) EXPECT_EQ(out[i], (5 * i) >> 2);
  const auto band = reference_band(m, img);
  EXPECT_TRUE(band.contains(out));
  for (int i = 0; i < 16; ++i) EXPECT_EQ(band.hi[i], out[i] + 1);
}

// Scatter-form conv: every input pixel pushes into the outputs it touches.
std::vector<std::int64_t> ScatterConv(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& w,
                                      int ci_n, int co_n, int k, int width) {
  const int h = k / 2;
  std::vector<std::int64_t> out(static_cast<std::size_t>(co_n) * width * width, 0);
  for (int ci = 0; ci < ci_n; ++ci) {
    for (int iy = 0; iy < width; ++iy) {
      for (int ix = 0; ix < width; ++ix) {
        const auto v = x[(ci * width + iy) * width + ix];
        for (int co = 0; co < co_n; ++co) {
          for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
              const int oy = iy - ky + h, ox = ix - kx + h;
              if (oy < 0 || oy >= width || ox < 0 || ox >= width) continue;
              out[(co * width + oy) * width + ox] += w[((co * ci_n + ci) * k + ky) * k + kx] * v;
            }
          }
        }
      }
    }
  }
  return out;
}

TEST(ReferenceTest, MatchesScatterImplementation) {
  const auto g = gen_random_model(tiny_cnn_skeleton(8, 4, 10, 4), 0.4, 21);
  const auto& m = g.model;
  const auto in = random_inputs(m.input, 20, 0, 15, 5);
  for (const auto& img : in.images) {
    Trace tr;
    const auto logits = reference_inference(m, img, &tr);
    // stage 0: conv 1 -> 4, relu, shift 4
    const auto c0 = ScatterConv(img, m.layers[0].weights, 1, 4, 3, 8);
    ASSERT_EQ(tr.linear_outputs[0], c0);
    std::vector<std::int64_t> a0;
    for (auto v : c0) a0.push_back(std::max<std::int64_t>(v >> 4, 0));
    // stage 1: conv 4 -> 4, relu, pool, shift 4
    const auto c1 = ScatterConv(a0, m.layers[2].weights, 4, 4, 3, 8);
    ASSERT_EQ(tr.linear_outputs[1], c1);
    std::vector<std::int64_t> a1;
    for (int c = 0; c < 4; ++c) {
      for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
          std::int64_t best = 0;
          for (int d = 0; d < 4; ++d) best = std::max(best, c1[(c * 8 + 2 * y + d / 2) * 8 + 2 * x + d % 2] >> 4);
          a1.push_back(best);
        }
      }
    }
    // stage 2 and 3: fc 64 -> 16 (relu, shift 4), fc 16 -> 10
    std::vector<std::int64_t> a2(16, 0), out(10, 0);
    for (int o = 0; o < 16; ++o) {
      std::int64_t acc = 0;
      for (int i = 0; i < 64; ++i) acc += m.layers[5].weights[o * 64 + i] * a1[i];
      a2[o] = std::max<std::int64_t>(acc >> 4, 0);
    }
    for (int o = 0; o < 10; ++o) {
      for (int i = 0; i < 16; ++i) out[o] += m.layers[7].weights[o * 16 + i] * a2[i];
    }
    ASSERT_EQ(logits, out);
    EXPECT_TRUE(reference_band(m, img).contains(logits));
  }
}

TEST(ReferenceTest, BoundCertification) {
  const auto g = gen_random_model(tiny_cnn_skeleton(), 0.0, 2);
  const auto in = random_inputs(g.model.input, 10, 0, 15, 1);
  const auto peak = max_linear_magnitude(g.model, in.images);
  EXPECT_GT(peak, 0);
  const int m = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(peak))) + 1;
  EXPECT_NO_THROW(certify_bound(g.model, in.images, m, kT));
  try {
    certify_bound(g.model, in.images, m - 1, kT);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("stage 0 (layer 0)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(reference_inference(g.model, std::vector<std::int64_t>{}), ParameterError);
}

TEST(CalibrationTest, Roundtrip) {
  const auto c = random_inputs({2, 3}, 4, -100, 100, 9);
  const auto path = (std::filesystem::temp_directory_path() / "trident_cal_test.bin").string();
  save_calibration(c, path);
  const auto back = load_calibration(path);
  EXPECT_EQ(back.shape, c.shape);
  EXPECT_EQ(back.images, c.images);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace trident::model
