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

#include "trident/bfv/evaluator.hpp"

#include <string>

#include "trident/common/error.hpp"
#include "trident/ring/decompose.hpp"

namespace trident::bfv {

namespace {

void check_owner(KeyOwner a, KeyOwner b, const char* op) {
  if (a != b) {
    throw ParameterError(std::string(op) + ": key-tag mismatch (" + to_string(a) + " vs " +
                         to_string(b) + ")");
  }
}

}  // namespace

Ciphertext Evaluator::add(const Ciphertext& a, const Ciphertext& b) {
  check_owner(a.owner(), b.owner(), "add");
  const Ciphertext bb = b.in_domain(a.domain());
  ++counters_.add;
  return Ciphertext(a.c0() + bb.c0(), a.c1() + bb.c1(), a.owner());
}

Ciphertext Evaluator::sub(const Ciphertext& a, const Ciphertext& b) {
  check_owner(a.owner(), b.owner(), "sub");
  const Ciphertext bb = b.in_domain(a.domain());
  ++counters_.add;
  return Ciphertext(a.c0() - bb.c0(), a.c1() - bb.c1(), a.owner());
}

Ciphertext Evaluator::add_plain(const Ciphertext& ct, const Plaintext& pt) {
  ++counters_.add_plain;
  const Polynomial dm = ctx_->scale_plain(pt).in_domain(ct.domain());
  return Ciphertext(ct.c0() + dm, ct.c1(), ct.owner());
}

Ciphertext Evaluator::sub_plain(const Ciphertext& ct, const Plaintext& pt) {
  ++counters_.add_plain;
  const Polynomial dm = ctx_->scale_plain(pt).in_domain(ct.domain());
  return Ciphertext(ct.c0() - dm, ct.c1(), ct.owner());
}

PlainMultiplier Evaluator::prepare_multiplier(const Plaintext& pt) const {
  return {ctx_->lift_centered(pt).to_evaluation()};
}

Ciphertext Evaluator::mul_plain(const Ciphertext& ct, const PlainMultiplier& w) {
  ++counters_.mul_plain;
  Polynomial c0 = ct.c0().to_evaluation();
  Polynomial c1 = ct.c1().to_evaluation();
  c0.mul_pointwise_inplace(w.lifted);
  c1.mul_pointwise_inplace(w.lifted);
  return Ciphertext(std::move(c0), std::move(c1), ct.owner());
}

Ciphertext Evaluator::key_switch(const Polynomial& c0, const Polynomial& c1,
                                 const SwitchingKey& key, KeyOwner owner) const {
  const auto digits = base_decompose(c1, key.base);
  Polynomial acc0 = c0.to_evaluation();
  Polynomial acc1 = Polynomial::zero(ctx_->q_ring(), Domain::kEvaluation);
  for (int i = 0; i < key.digits; ++i) {
    const Polynomial d = digits[i].to_evaluation();
    acc0.fma_pointwise(d, key.k0[i]);
    acc1.fma_pointwise(d, key.k1[i]);
  }
  return Ciphertext(std::move(acc0), std::move(acc1), owner);
}

Ciphertext Evaluator::apply_galois(const Ciphertext& ct, const EvaluationKey& key) {
  check_owner(ct.owner(), key.owner, "apply_galois");
  ++counters_.keyswitches;
  counters_.galois_used.push_back(key.galois_element);
  const Ciphertext c = ct.in_domain(Domain::kCoefficient);
  return key_switch(c.c0().automorphism(key.galois_element),
                    c.c1().automorphism(key.galois_element), key.key, ct.owner());
}

Ciphertext Evaluator::rotate(const Ciphertext& ct, std::int64_t steps, const GaloisKeys& keys) {
  const auto row = static_cast<std::int64_t>(ctx_->row_size());
  if (steps <= -row || steps >= row) {
    throw ParameterError("rotate: |steps| must be below n/2");
  }
  std::int64_t k = ((steps % row) + row) % row;
  if (k == 0) return ct;
  check_owner(ct.owner(), keys.owner(), "rotate");
  ++counters_.rotations;
  if (keys.mode() == KeyMode::kAllKeys) {
    return apply_galois(ct, keys.at(galois_element_for_step(ctx_->n(), k)));
  }
  Ciphertext out = ct;
  for (std::int64_t bit = 1; bit < row; bit <<= 1) {
    if (k & bit) out = apply_galois(out, keys.at(galois_element_for_step(ctx_->n(), bit)));
  }
  return out;
}

Ciphertext Evaluator::swap_rows(const Ciphertext& ct, const GaloisKeys& keys) {
  return apply_galois(ct, keys.at(row_swap_element(ctx_->n())));
}

Ciphertext Evaluator::reencrypt(const Ciphertext& ct, const ReEncryptionKey& rk) {
  check_owner(ct.owner(), rk.from, "reencrypt");
  ++counters_.reencryptions;
  const Ciphertext c = ct.in_domain(Domain::kCoefficient);
  return key_switch(c.c0(), c.c1(), rk.key, rk.to);
}

}  // namespace trident::bfv
