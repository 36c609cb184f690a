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

#ifndef TRIDENT_BFV_EVALUATOR_HPP_
#define TRIDENT_BFV_EVALUATOR_HPP_

#include <cstdint>
#include <vector>

#include "trident/bfv/ciphertext.hpp"
#include "trident/bfv/context.hpp"
#include "trident/bfv/keys.hpp"

namespace trident::bfv {

// A plaintext multiplicand prepared once: centered lift into R_q, NTT form.
struct PlainMultiplier {
  Polynomial lifted;
};

struct EvalCounters {
  std::uint64_t add = 0;
  std::uint64_t add_plain = 0;
  std::uint64_t mul_plain = 0;
  std::uint64_t rotations = 0;     // logical rotate() calls with nonzero offset
  std::uint64_t keyswitches = 0;   // automorphism applications
  std::uint64_t reencryptions = 0;
  std::vector<std::uint64_t> galois_used;  // every element consumed, in order
};

// Homomorphic operations on ciphertexts. Holds op counters, so one instance
// belongs to one role; the context it shares is read-only.
class Evaluator {
 public:
  explicit Evaluator(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  const Context& context() const { return *ctx_; }
  const EvalCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = {}; }

  // Componentwise sum (c0 + c0', c1 + c1').
  Ciphertext add(const Ciphertext& a, const Ciphertext& b);
  Ciphertext sub(const Ciphertext& a, const Ciphertext& b);
  Ciphertext add_plain(const Ciphertext& ct, const Plaintext& pt);
  Ciphertext sub_plain(const Ciphertext& ct, const Plaintext& pt);

  PlainMultiplier prepare_multiplier(const Plaintext& pt) const;
  // (m_w c0, m_w c1). The result is left in the evaluation domain.
  Ciphertext mul_plain(const Ciphertext& ct, const PlainMultiplier& w);
  Ciphertext mul_plain(const Ciphertext& ct, const Plaintext& pt) {
    return mul_plain(ct, prepare_multiplier(pt));
  }

  // Automorphism x -> x^g followed by key switching back to the owner's key.
  Ciphertext apply_galois(const Ciphertext& ct, const EvaluationKey& key);
  // Rotates both rows left by `steps` (negative steps rotate right).
  // All-keys mode uses the single element 3^steps; log-keys mode composes
  // one power-of-two rotation per set bit of steps mod n/2.
  Ciphertext rotate(const Ciphertext& ct, std::int64_t steps, const GaloisKeys& keys);
  Ciphertext swap_rows(const Ciphertext& ct, const GaloisKeys& keys);

  // Switches a client-key ciphertext to the proxy key: decompose c1 in base
  // w, then c0' = c0 + sum pk0_i c1_i and c1' = sum pk1_i c1_i.
  Ciphertext reencrypt(const Ciphertext& ct, const ReEncryptionKey& rk);

 private:
  Ciphertext key_switch(const Polynomial& c0, const Polynomial& c1, const SwitchingKey& key,
                        KeyOwner owner) const;

  ContextPtr ctx_;
  EvalCounters counters_;
};

}  // namespace trident::bfv

#endif  // TRIDENT_BFV_EVALUATOR_HPP_
