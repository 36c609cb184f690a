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

#ifndef TRIDENT_MODEL_MODEL_HPP_
#define TRIDENT_MODEL_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trident/linear/conv.hpp"

namespace trident::model {

enum class LayerKind : std::uint8_t { kConv = 0, kFc = 1, kRelu = 2, kMaxPool = 3 };
const char* to_string(LayerKind k);
LayerKind parse_layer_kind(const std::string& s);

// Square feature map. An fc output is (features, 1).
struct TensorShape {
  int channels = 1;
  int width = 1;
  std::size_t size() const { return static_cast<std::size_t>(channels) * width * width; }
  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  // conv
  int out_channels = 0;
  int kernel = 3;
  int stride = 1;
  linear::Padding padding = linear::Padding::kSame;
  // fc
  int out_features = 0;
  // maxpool
  int pool = 2;
  // conv and fc: right shift applied by the activation group that follows.
  int shift = 0;
  std::vector<std::int64_t> weights;  // conv (c_o, c_i, k, k); fc (n_o, n_i)
  std::optional<double> declared_sparsity;

  bool is_linear() const { return kind == LayerKind::kConv || kind == LayerKind::kFc; }
  double sparsity() const;  // realized fraction of zero weights
};

enum class Activation : std::uint8_t { kNone = 0, kRelu = 1, kMaxPool = 2, kReluMaxPool = 3 };

// One linear layer plus the activation group after it.
struct Stage {
  std::size_t layer = 0;  // index of the linear layer
  LayerKind kind = LayerKind::kConv;
  Activation act = Activation::kNone;
  int pool = 1;
  int shift = 0;
  TensorShape in;
  TensorShape linear_out;
  TensorShape out;
  linear::ConvSpec conv;  // valid for conv stages
  int n_i = 0, n_o = 0;   // valid for fc stages
};

struct ModelSpec {
  std::string name;
  std::string preset = "toy";
  TensorShape input;
  int value_bits = 0;  // m: every linear output satisfies |x| < 2^(m-1); 0 when undeclared
  std::vector<LayerSpec> layers;

  // Structural and range checks against plaintext modulus t. Returns
  // warnings (declared sparsity mismatch); throws ParameterError naming the
  // layer index otherwise.
  std::vector<std::string> validate(std::uint64_t t) const;
  // Requires a structurally valid model.
  std::vector<Stage> stages() const;
  std::size_t depth() const;  // number of linear layers
  TensorShape output_shape() const;
};

// JSON document; weights travel as base64 of little-endian int32.
ModelSpec load_model(const std::string& text);
ModelSpec load_model_file(const std::string& path);
std::string save_model(const ModelSpec& m);
void save_model_file(const ModelSpec& m, const std::string& path);
// Hex BLAKE2b-256 of the canonical document.
std::string model_checksum(const ModelSpec& m);

struct Quantized {
  std::vector<std::int64_t> values;
  std::size_t clamped = 0;
};
// round_half_even(w * 2^f), clamped to the centered range of Z_t.
Quantized quantize(std::span<const double> w, int f, std::uint64_t t);
std::vector<double> dequantize(std::span<const std::int64_t> q, int f);

struct Generated {
  ModelSpec model;
  double realized_sparsity = 0;  // over conv kernel elements
};
// Fills every linear layer of `skeleton` with nonzero weights in
// [-weight_bound, weight_bound]; each conv kernel element is zeroed with
// probability alpha.
Generated gen_random_model(const ModelSpec& skeleton, double alpha, std::uint64_t seed,
                           int weight_bound = 7);

// The small CNN used throughout the tests: conv 3x3 (1 -> c_o) on w x w,
// ReLU, 2x2 max pool, fc to `classes`; depth 4 inserts conv+ReLU and fc+ReLU.
ModelSpec tiny_cnn_skeleton(int width = 8, int c_o = 4, int classes = 10, int depth = 2,
                            int shift = 4);

// Exact integer pipeline: linear layers in Z, activation, then an
// arithmetic shift by the layer's f.
struct Trace {
  std::vector<std::vector<std::int64_t>> linear_outputs;  // one per stage
  std::vector<std::int64_t> logits;
};
std::vector<std::int64_t> reference_inference(const ModelSpec& m, std::span<const std::int64_t> image,
                                              Trace* trace = nullptr);

// Elementwise logit interval when every activation output may be one too
// large, as with share truncation.
struct Band {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
  bool contains(std::span<const std::int64_t> v) const;
};
Band reference_band(const ModelSpec& m, std::span<const std::int64_t> image);

// Largest |x| over linear outputs that feed an activation, band edges included.
std::int64_t max_linear_magnitude(const ModelSpec& m, const std::vector<std::vector<std::int64_t>>& images);
// Throws ParameterError naming the first stage whose masked outputs reach
// 2^(m-1), or whose unmasked output leaves the centered range of Z_t.
void certify_bound(const ModelSpec& m, const std::vector<std::vector<std::int64_t>>& images, int value_bits,
                   std::uint64_t t);

// Calibration set: "TCAL", u32 version, u32 count, u32 channels, u32 width,
// then count tensors of int32 little-endian.
struct Calibration {
  TensorShape shape;
  std::vector<std::vector<std::int64_t>> images;
};
Calibration load_calibration(const std::string& path);
void save_calibration(const Calibration& c, const std::string& path);
Calibration random_inputs(const TensorShape& shape, std::size_t count, std::int64_t lo, std::int64_t hi,
                          std::uint64_t seed);

std::size_t argmax(std::span<const std::int64_t> v);

}  // namespace trident::model

#endif  // TRIDENT_MODEL_MODEL_HPP_
