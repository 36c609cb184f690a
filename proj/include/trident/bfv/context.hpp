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

#ifndef TRIDENT_BFV_CONTEXT_HPP_
#define TRIDENT_BFV_CONTEXT_HPP_

#include <cstdint>
#include <memory>

#include "trident/ring/batch_encoder.hpp"
#include "trident/ring/params.hpp"
#include "trident/ring/polynomial.hpp"
#include "trident/ring/sampling.hpp"

namespace trident::bfv {

// A plaintext polynomial in R_t, coefficient form.
struct Plaintext {
  Polynomial poly;
  friend bool operator==(const Plaintext&, const Plaintext&) = default;
};

// Read-only scheme context shared by every role. Holds the R_q and R_t rings,
// the batch encoder, the error sampler and the scaling factor round(q/t).
class Context {
 public:
  static std::shared_ptr<const Context> create(const RingParams& params);

  const RingParams& params() const { return params_; }
  std::size_t n() const { return params_.n; }
  std::size_t row_size() const { return params_.n / 2; }
  const RingContextPtr& q_ring() const { return q_ring_; }
  const RingContextPtr& t_ring() const { return t_ring_; }
  const Modulus& q() const { return q_ring_->modulus(); }
  const Modulus& t() const { return t_ring_->modulus(); }
  const BatchEncoder& encoder() const { return encoder_; }
  const GaussianSampler& error_sampler() const { return chi_; }
  std::uint64_t delta() const { return delta_; }

  Plaintext encode(const SlotVector& slots) const { return {encoder_.encode(slots)}; }
  SlotVector decode(const Plaintext& pt) const { return encoder_.decode(pt.poly); }
  // Encodes a slot vector given as signed integers reduced mod t.
  Plaintext encode_signed(std::span<const std::int64_t> values) const;

  // Centered lift of a plaintext from R_t into R_q.
  Polynomial lift_centered(const Plaintext& pt) const;
  // delta * m with m lifted from [0, t).
  Polynomial scale_plain(const Plaintext& pt) const;

 private:
  explicit Context(const RingParams& params);

  RingParams params_;
  RingContextPtr q_ring_;
  RingContextPtr t_ring_;
  BatchEncoder encoder_;
  GaussianSampler chi_;
  std::uint64_t delta_;
};

using ContextPtr = std::shared_ptr<const Context>;

}  // namespace trident::bfv

#endif  // TRIDENT_BFV_CONTEXT_HPP_
