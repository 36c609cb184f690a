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

#include "trident/bfv/ciphertext.hpp"

#include <string>

#include "trident/common/error.hpp"

namespace trident::bfv {

Ciphertext::Ciphertext(Polynomial c0, Polynomial c1, KeyOwner owner, bool fresh)
    : c0_(std::move(c0)), c1_(std::move(c1)), owner_(owner), fresh_(fresh) {
  if (c0_.domain() != c1_.domain()) c1_ = c1_.in_domain(c0_.domain());
}

Ciphertext Ciphertext::in_domain(Domain d) const {
  if (domain() == d) return *this;
  Ciphertext out(c0_.in_domain(d), c1_.in_domain(d), owner_, fresh_);
  out.c1_seed_ = c1_seed_;
  return out;
}

Ciphertext Ciphertext::with_seed(const Seed& seed) const {
  Ciphertext out = *this;
  out.c1_seed_ = seed;
  return out;
}

void Ciphertext::serialize(ByteWriter& out, bool allow_seeded) const {
  const bool seeded = allow_seeded && fresh_ && c1_seed_.has_value();
  out.u8(static_cast<std::uint8_t>(seeded ? WireTag::kSeededCiphertext : WireTag::kCiphertext));
  out.u8(static_cast<std::uint8_t>(owner_));
  c0_.serialize(out);
  if (seeded) {
    out.bytes(*c1_seed_);
  } else {
    c1_.serialize(out);
  }
}

Ciphertext Ciphertext::deserialize(ByteReader& in, const Context& ctx) {
  const auto tag = in.u8();
  const auto owner_raw = in.u8();
  if (owner_raw > 2) throw IntegrityError("bad key-owner tag in ciphertext");
  const auto owner = static_cast<KeyOwner>(owner_raw);
  Polynomial c0 = Polynomial::deserialize(in, ctx.q_ring());
  if (tag == static_cast<std::uint8_t>(WireTag::kCiphertext)) {
    Polynomial c1 = Polynomial::deserialize(in, ctx.q_ring());
    return Ciphertext(std::move(c0), std::move(c1), owner);
  }
  if (tag == static_cast<std::uint8_t>(WireTag::kSeededCiphertext)) {
    Seed seed;
    const auto raw = in.bytes(seed.size());
    std::copy(raw.begin(), raw.end(), seed.begin());
    Prng expand(seed);
    Polynomial c1 = sample_uniform(ctx.q_ring(), expand);
    return Ciphertext(std::move(c0), std::move(c1), owner, true).with_seed(seed);
  }
  throw IntegrityError("unexpected type tag while reading ciphertext");
}

Ciphertext encrypt(const Context& ctx, const SecretKey& sk, const Plaintext& pt, Prng& prng) {
  if (pt.poly.n() != ctx.n() || pt.poly.modulus().value() != ctx.params().t) {
    throw ParameterError("encrypt: plaintext is not in R_t");
  }
  const Seed seed = prng.next_seed();
  Prng expand(seed);
  Polynomial a = sample_uniform(ctx.q_ring(), expand);
  const Polynomial e = sample_gaussian(ctx.q_ring(), ctx.error_sampler(), prng);
  Polynomial as = a.to_evaluation();
  as.mul_pointwise_inplace(sk.ntt());
  Polynomial c0 = ctx.scale_plain(pt) + e - as.to_coefficient();
  return Ciphertext(std::move(c0), std::move(a), sk.owner(), true).with_seed(seed);
}

Polynomial decryption_phase(const Context& ctx, const SecretKey& sk, const Ciphertext& ct) {
  if (ct.c0().n() != ctx.n()) throw ParameterError("ciphertext ring degree mismatch");
  Polynomial c1s = ct.c1().to_evaluation();
  c1s.mul_pointwise_inplace(sk.ntt());
  return (ct.c0().to_evaluation() + c1s).to_coefficient();
}

Plaintext decrypt(const Context& ctx, const SecretKey& sk, const Ciphertext& ct) {
  const Polynomial x = decryption_phase(ctx, sk, ct);
  const u128 q = ctx.params().q, t = ctx.params().t;
  std::vector<std::uint64_t> m(ctx.n());
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    m[i] = static_cast<std::uint64_t>(((t * x[i] + q / 2) / q) % t);
  }
  return {Polynomial::from_coeffs(ctx.t_ring(), std::move(m))};
}

Ciphertext zero_ciphertext(const Context& ctx, KeyOwner owner) {
  return Ciphertext(Polynomial::zero(ctx.q_ring()), Polynomial::zero(ctx.q_ring()), owner);
}

}  // namespace trident::bfv
