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

#include "trident/bfv/context.hpp"

#include "trident/common/error.hpp"

namespace trident::bfv {

Context::Context(const RingParams& params)
    : params_(params),
      q_ring_(RingContext::create(params.n, params.q)),
      t_ring_(RingContext::create(params.n, params.t)),
      encoder_(t_ring_),
      chi_(params.sigma) {
  const u128 q = params.q, t = params.t;
  delta_ = static_cast<std::uint64_t>((q + t / 2) / t);
}

std::shared_ptr<const Context> Context::create(const RingParams& params) {
  params.validate();
  return std::shared_ptr<const Context>(new Context(params));
}

Plaintext Context::encode_signed(std::span<const std::int64_t> values) const {
  if (values.size() > n()) throw ParameterError("encode_signed: more values than slots");
  SlotVector slots{std::vector<std::uint64_t>(n(), 0)};
  for (std::size_t i = 0; i < values.size(); ++i) slots.values[i] = t().from_signed(values[i]);
  return encode(slots);
}

Polynomial Context::lift_centered(const Plaintext& pt) const {
  const auto c = pt.poly.to_coefficient();
  std::vector<std::int64_t> v(n());
  for (std::size_t i = 0; i < n(); ++i) v[i] = t().centered(c[i]);
  return Polynomial::from_signed(q_ring_, v);
}

Polynomial Context::scale_plain(const Plaintext& pt) const {
  const auto c = pt.poly.to_coefficient();
  std::vector<std::uint64_t> v(n());
  for (std::size_t i = 0; i < n(); ++i) v[i] = q().mul(c[i], delta_);
  return Polynomial::from_coeffs(q_ring_, std::move(v));
}

}  // namespace trident::bfv
