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

#ifndef TRIDENT_BFV_CIPHERTEXT_HPP_
#define TRIDENT_BFV_CIPHERTEXT_HPP_

#include <optional>

#include "trident/bfv/context.hpp"
#include "trident/bfv/keys.hpp"
#include "trident/common/bytes.hpp"

namespace trident::bfv {

// (c0, c1) in R_q^2 with c0 + c1 s = delta m + v (mod q). Both components
// share a domain. A fresh symmetric encryption remembers the seed of its
// uniform c1 so it can travel as (c0, seed).
class Ciphertext {
 public:
  Ciphertext() = default;
  Ciphertext(Polynomial c0, Polynomial c1, KeyOwner owner, bool fresh = false);

  const Polynomial& c0() const { return c0_; }
  const Polynomial& c1() const { return c1_; }
  KeyOwner owner() const { return owner_; }
  bool fresh() const { return fresh_; }
  Domain domain() const { return c0_.domain(); }
  const std::optional<Seed>& c1_seed() const { return c1_seed_; }

  Ciphertext in_domain(Domain d) const;
  Ciphertext with_seed(const Seed& seed) const;

  // Full form: tag 0x10, owner, c0, c1. Seeded form (fresh only): tag 0x15,
  // owner, c0, 32-byte seed.
  void serialize(ByteWriter& out, bool allow_seeded = true) const;
  static Ciphertext deserialize(ByteReader& in, const Context& ctx);
  Bytes to_bytes(bool allow_seeded = true) const {
    ByteWriter w;
    serialize(w, allow_seeded);
    return w.take();
  }

 private:
  Polynomial c0_, c1_;
  KeyOwner owner_ = KeyOwner::kNone;
  bool fresh_ = false;
  std::optional<Seed> c1_seed_;
};

// Symmetric encryption: c1 = a uniform, c0 = -a s + e + delta m.
Ciphertext encrypt(const Context& ctx, const SecretKey& sk, const Plaintext& pt, Prng& prng);
// round(t/q * [c0 + c1 s]_q) mod t.
Plaintext decrypt(const Context& ctx, const SecretKey& sk, const Ciphertext& ct);

// [c0 + c1 s]_q in coefficient form.
Polynomial decryption_phase(const Context& ctx, const SecretKey& sk, const Ciphertext& ct);

// Transparent encryption of zero, (0, 0), tagged with an owner.
Ciphertext zero_ciphertext(const Context& ctx, KeyOwner owner);

}  // namespace trident::bfv

#endif  // TRIDENT_BFV_CIPHERTEXT_HPP_
