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

#include "trident/bfv/keys.hpp"

#include <bit>
#include <string>

#include "trident/common/error.hpp"
#include "trident/ring/decompose.hpp"

namespace trident::bfv {

const char* to_string(KeyOwner owner) {
  switch (owner) {
    case KeyOwner::kClient:
      return "client";
    case KeyOwner::kProxy:
      return "proxy";
    default:
      return "none";
  }
}

const char* to_string(KeyMode mode) {
  return mode == KeyMode::kAllKeys ? "all-keys" : "log-keys";
}

KeyMode parse_key_mode(const std::string& s) {
  if (s == "all-keys" || s == "all") return KeyMode::kAllKeys;
  if (s == "log-keys" || s == "log") return KeyMode::kLogKeys;
  throw ParameterError("unknown key mode '" + s + "' (expected all-keys or log-keys)");
}

namespace {

KeyOwner read_owner(ByteReader& in) {
  const auto v = in.u8();
  if (v > 2) throw IntegrityError("bad key-owner tag");
  return static_cast<KeyOwner>(v);
}

void expect_tag(ByteReader& in, WireTag tag, const char* what) {
  if (in.u8() != static_cast<std::uint8_t>(tag)) {
    throw IntegrityError(std::string("unexpected type tag while reading ") + what);
  }
}

}  // namespace

SecretKey::SecretKey(Polynomial s, KeyOwner owner)
    : s_(s.to_coefficient()), s_ntt_(s.to_evaluation()), owner_(owner) {}

void SecretKey::serialize(ByteWriter& out) const {
  out.u8(static_cast<std::uint8_t>(WireTag::kSecretKey));
  out.u8(static_cast<std::uint8_t>(owner_));
  s_.serialize(out);
}

SecretKey SecretKey::deserialize(ByteReader& in, const Context& ctx) {
  expect_tag(in, WireTag::kSecretKey, "secret key");
  const KeyOwner owner = read_owner(in);
  return SecretKey(Polynomial::deserialize(in, ctx.q_ring()), owner);
}

SecretKey keygen(const Context& ctx, KeyOwner owner, Prng& prng) {
  return SecretKey(sample_ternary(ctx.q_ring(), prng), owner);
}

SwitchingKey make_switching_key(const Context& ctx, const Polynomial& source,
                                const SecretKey& target, std::uint64_t base, Prng& prng) {
  SwitchingKey key;
  key.base = base;
  key.digits = digit_count(ctx.params().q, base);
  const auto& q = ctx.q();
  const Polynomial src = source.to_coefficient();
  for (int i = 0; i < key.digits; ++i) {
    const Polynomial a = sample_uniform(ctx.q_ring(), prng);
    const Polynomial e = sample_gaussian(ctx.q_ring(), ctx.error_sampler(), prng);
    Polynomial as = a.to_evaluation();
    as.mul_pointwise_inplace(target.ntt());
    const std::uint64_t wi = q.pow(base % q.value(), static_cast<std::uint64_t>(i));
    Polynomial k0 = src.scaled(wi) - e;
    k0 = k0.to_evaluation() - as;
    key.k0.push_back(std::move(k0));
    key.k1.push_back(a.to_evaluation());
  }
  return key;
}

void SwitchingKey::serialize(ByteWriter& out) const {
  out.u64(base);
  out.u64(static_cast<std::uint64_t>(digits));
  for (int i = 0; i < digits; ++i) {
    k0[i].serialize(out);
    k1[i].serialize(out);
  }
}

SwitchingKey SwitchingKey::deserialize(ByteReader& in, const Context& ctx) {
  SwitchingKey key;
  key.base = in.u64();
  const std::uint64_t digits = in.u64();
  if (key.base < 2 || digits != static_cast<std::uint64_t>(digit_count(ctx.params().q, key.base))) {
    throw IntegrityError("switching key digit count inconsistent with base");
  }
  key.digits = static_cast<int>(digits);
  for (int i = 0; i < key.digits; ++i) {
    key.k0.push_back(Polynomial::deserialize(in, ctx.q_ring()).to_evaluation());
    key.k1.push_back(Polynomial::deserialize(in, ctx.q_ring()).to_evaluation());
  }
  return key;
}

EvaluationKey galois_keygen(const Context& ctx, const SecretKey& sk, std::uint64_t galois_element,
                            std::uint64_t base, Prng& prng) {
  EvaluationKey ek;
  ek.galois_element = galois_element;
  ek.owner = sk.owner();
  ek.key = make_switching_key(ctx, sk.poly().automorphism(galois_element), sk, base, prng);
  return ek;
}

void EvaluationKey::serialize(ByteWriter& out) const {
  out.u8(static_cast<std::uint8_t>(WireTag::kEvaluationKey));
  out.u8(static_cast<std::uint8_t>(owner));
  out.u64(galois_element);
  key.serialize(out);
}

EvaluationKey EvaluationKey::deserialize(ByteReader& in, const Context& ctx) {
  expect_tag(in, WireTag::kEvaluationKey, "evaluation key");
  EvaluationKey ek;
  ek.owner = read_owner(in);
  ek.galois_element = in.u64();
  if (ek.galois_element % 2 == 0 || ek.galois_element >= 2 * ctx.n()) {
    throw IntegrityError("evaluation key has an invalid galois element");
  }
  ek.key = SwitchingKey::deserialize(in, ctx);
  return ek;
}

ReEncryptionKey reenc_keygen(const Context& ctx, const SecretKey& sk_client,
                             const SecretKey& sk_proxy, std::uint64_t base, Prng& prng) {
  if (sk_client.poly().n() != sk_proxy.poly().n() ||
      sk_client.poly().modulus().value() != sk_proxy.poly().modulus().value() ||
      sk_client.poly().n() != ctx.n()) {
    throw ParameterError("reenc_keygen: keys do not share parameters");
  }
  ReEncryptionKey rk;
  rk.from = sk_client.owner();
  rk.to = sk_proxy.owner();
  rk.key = make_switching_key(ctx, sk_client.poly(), sk_proxy, base, prng);
  return rk;
}

void ReEncryptionKey::serialize(ByteWriter& out) const {
  out.u8(static_cast<std::uint8_t>(WireTag::kReEncryptionKey));
  out.u8(static_cast<std::uint8_t>(to));
  out.u8(static_cast<std::uint8_t>(from));
  key.serialize(out);
}

ReEncryptionKey ReEncryptionKey::deserialize(ByteReader& in, const Context& ctx) {
  expect_tag(in, WireTag::kReEncryptionKey, "re-encryption key");
  ReEncryptionKey rk;
  rk.to = read_owner(in);
  rk.from = read_owner(in);
  rk.key = SwitchingKey::deserialize(in, ctx);
  return rk;
}

std::uint64_t galois_element_for_step(std::size_t n, std::int64_t steps) {
  const auto row = static_cast<std::int64_t>(n / 2);
  std::int64_t k = steps % row;
  if (k < 0) k += row;
  const std::uint64_t m = 2 * n;
  std::uint64_t g = 1;
  for (std::int64_t i = 0; i < k; ++i) g = (g * 3) % m;
  return g;
}

std::uint64_t row_swap_element(std::size_t n) { return 2 * n - 1; }

std::set<std::uint64_t> required_galois_elements(std::size_t n, KeyMode mode,
                                                 const std::set<std::int64_t>& steps) {
  std::set<std::uint64_t> out;
  const auto row = static_cast<std::int64_t>(n / 2);
  if (mode == KeyMode::kLogKeys) {
    for (std::int64_t p = 1; p < row; p <<= 1) out.insert(galois_element_for_step(n, p));
  } else if (steps.empty()) {
    for (std::int64_t k = 1; k < row; ++k) out.insert(galois_element_for_step(n, k));
  } else {
    for (auto s : steps) {
      if (((s % row) + row) % row != 0) out.insert(galois_element_for_step(n, s));
    }
  }
  out.insert(row_swap_element(n));
  return out;
}

const EvaluationKey& GaloisKeys::at(std::uint64_t g) const {
  auto it = keys_.find(g);
  if (it == keys_.end()) {
    throw MissingKeyError(g, "missing Galois key for element " + std::to_string(g));
  }
  return it->second;
}

void GaloisKeys::insert(EvaluationKey key) {
  if (owner_ != KeyOwner::kNone && key.owner != owner_) {
    throw ParameterError("galois key owner does not match key set");
  }
  keys_[key.galois_element] = std::move(key);
}

std::vector<std::uint64_t> GaloisKeys::elements() const {
  std::vector<std::uint64_t> out;
  for (const auto& [g, _] : keys_) out.push_back(g);
  return out;
}

void GaloisKeys::serialize(ByteWriter& out) const {
  out.u8(static_cast<std::uint8_t>(WireTag::kGaloisKeys));
  out.u8(static_cast<std::uint8_t>(owner_));
  out.u8(static_cast<std::uint8_t>(mode_));
  out.u64(keys_.size());
  for (const auto& [_, k] : keys_) k.serialize(out);
}

GaloisKeys GaloisKeys::deserialize(ByteReader& in, const Context& ctx) {
  expect_tag(in, WireTag::kGaloisKeys, "galois key set");
  const KeyOwner owner = read_owner(in);
  const auto mode = in.u8();
  if (mode > 1) throw IntegrityError("bad key mode tag");
  GaloisKeys keys(static_cast<KeyMode>(mode), owner);
  const std::uint64_t count = in.u64();
  for (std::uint64_t i = 0; i < count; ++i) keys.insert(EvaluationKey::deserialize(in, ctx));
  return keys;
}

GaloisKeys make_galois_keys(const Context& ctx, const SecretKey& sk, KeyMode mode,
                            std::uint64_t base, Prng& prng, const std::set<std::int64_t>& steps) {
  GaloisKeys keys(mode, sk.owner());
  for (auto g : required_galois_elements(ctx.n(), mode, steps)) {
    keys.insert(galois_keygen(ctx, sk, g, base, prng));
  }
  return keys;
}

}  // namespace trident::bfv
