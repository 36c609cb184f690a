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

#ifndef TRIDENT_GC_OT_HPP_
#define TRIDENT_GC_OT_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trident/common/bytes.hpp"
#include "trident/gc/garble.hpp"

namespace trident::gc {

enum class LabelDelivery : std::uint8_t { kDealer = 0, kBaseOt = 1 };
const char* to_string(LabelDelivery d);
LabelDelivery parse_label_delivery(const std::string& s);

// Test-only trusted channel: hands over the chosen label of each pair.
std::vector<Block> dealer_deliver(std::span<const std::array<Block, 2>> pairs,
                                  std::span<const std::uint8_t> choices);

// 1-of-2 OT over ristretto255, one transfer per choice bit.
using Point = std::array<std::uint8_t, 32>;
using Scalar = std::array<std::uint8_t, 32>;

inline constexpr std::size_t kOtPointBytes = 32;
inline constexpr std::size_t kOtBoxBytes = kLabelBytes + 16;
// Per-bit and per-batch transfer overhead on top of the label itself.
inline constexpr std::size_t kOtBytesPerBit = kOtPointBytes + 2 * kOtBoxBytes;
inline constexpr std::size_t kOtBytesPerBatch = kOtPointBytes;

struct OtSender {
  Scalar a{};
  Point A{};
  // Fresh randomness, or a scalar expanded from `seed` for reproducible runs.
  static OtSender create(const Seed* seed = nullptr);
};

struct OtRequest {
  std::vector<Point> B;
  Bytes serialize() const;
  static OtRequest deserialize(ByteReader& in);
};

struct OtResponse {
  std::vector<std::array<std::uint8_t, 2 * kOtBoxBytes>> boxes;
  Bytes serialize() const;
  static OtResponse deserialize(ByteReader& in);
};

class OtReceiver {
 public:
  OtReceiver(const Point& A, std::span<const std::uint8_t> choices, const Seed* seed = nullptr);
  const OtRequest& request() const { return request_; }
  // Throws IntegrityError if a box fails to open.
  std::vector<Block> finish(const OtResponse& resp) const;

 private:
  Point A_{};
  std::vector<Scalar> b_;
  std::vector<std::uint8_t> choices_;
  OtRequest request_;
};

OtResponse ot_respond(const OtSender& s, const OtRequest& req,
                      std::span<const std::array<Block, 2>> pairs);

}  // namespace trident::gc

#endif  // TRIDENT_GC_OT_HPP_
