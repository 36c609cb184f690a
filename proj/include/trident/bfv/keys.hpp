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

#ifndef TRIDENT_BFV_KEYS_HPP_
#define TRIDENT_BFV_KEYS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "trident/bfv/context.hpp"
#include "trident/common/bytes.hpp"

namespace trident::bfv {

enum class KeyOwner : std::uint8_t { kNone = 0, kClient = 1, kProxy = 2 };
const char* to_string(KeyOwner owner);

// Wire type tags shared by every serialized scheme object.
enum class WireTag : std::uint8_t {
  kCiphertext = 0x10,
  kSecretKey = 0x11,
  kEvaluationKey = 0x12,
  kReEncryptionKey = 0x13,
  kGaloisKeys = 0x14,
  kSeededCiphertext = 0x15,
};

// Ternary secret s in R_q with its NTT form cached.
class SecretKey {
 public:
  SecretKey() = default;
  SecretKey(Polynomial s, KeyOwner owner);

  const Polynomial& poly() const { return s_; }
  const Polynomial& ntt() const { return s_ntt_; }
  KeyOwner owner() const { return owner_; }

  void serialize(ByteWriter& out) const;
  static SecretKey deserialize(ByteReader& in, const Context& ctx);
  Bytes to_bytes() const {
    ByteWriter w;
    serialize(w);
    return w.take();
  }

 private:
  Polynomial s_;
  Polynomial s_ntt_;
  KeyOwner owner_ = KeyOwner::kNone;
};

SecretKey keygen(const Context& ctx, KeyOwner owner, Prng& prng);

// Decomposed key-switching material from a source secret s' to a target
// secret s: part i is ([-(a_i s + e_i) + w^i s']_q, a_i) for i < l.
// Parts are kept in the NTT domain.
struct SwitchingKey {
  std::uint64_t base = 0;
  int digits = 0;
  std::vector<Polynomial> k0;
  std::vector<Polynomial> k1;

  void serialize(ByteWriter& out) const;
  static SwitchingKey deserialize(ByteReader& in, const Context& ctx);
};

SwitchingKey make_switching_key(const Context& ctx, const Polynomial& source,
                                const SecretKey& target, std::uint64_t base, Prng& prng);

// Key for the automorphism x -> x^g, switching s(x^g) back to s.
struct EvaluationKey {
  std::uint64_t galois_element = 0;
  KeyOwner owner = KeyOwner::kNone;
  SwitchingKey key;

  std::uint64_t base() const { return key.base; }
  int digits() const { return key.digits; }
  void serialize(ByteWriter& out) const;
  static EvaluationKey deserialize(ByteReader& in, const Context& ctx);
};

EvaluationKey galois_keygen(const Context& ctx, const SecretKey& sk, std::uint64_t galois_element,
                            std::uint64_t base, Prng& prng);

// Switches ciphertexts from the client secret s_c to the proxy secret s_p.
struct ReEncryptionKey {
  KeyOwner from = KeyOwner::kClient;
  KeyOwner to = KeyOwner::kProxy;
  SwitchingKey key;

  std::uint64_t base() const { return key.base; }
  int digits() const { return key.digits; }
  void serialize(ByteWriter& out) const;
  static ReEncryptionKey deserialize(ByteReader& in, const Context& ctx);
};

// Only the client runs this: it holds both secrets at setup.
ReEncryptionKey reenc_keygen(const Context& ctx, const SecretKey& sk_client,
                             const SecretKey& sk_proxy, std::uint64_t base, Prng& prng);

// All-keys provisions one key per rotation step; log-keys provisions the
// power-of-two steps and composes other rotations from them.
enum class KeyMode : std::uint8_t { kAllKeys = 0, kLogKeys = 1 };
const char* to_string(KeyMode mode);
KeyMode parse_key_mode(const std::string& s);

// Galois element 3^k mod 2n rotating both rows left by k (k taken mod n/2).
std::uint64_t galois_element_for_step(std::size_t n, std::int64_t steps);
// 2n - 1: swaps the two rows.
std::uint64_t row_swap_element(std::size_t n);

// Galois elements a key set must contain. In log-keys mode this is
// {3^(2^j) : 2^j < n/2} plus the row swap. In all-keys mode it is one element
// per distinct nonzero step in `steps` (every step when empty) plus the row swap.
std::set<std::uint64_t> required_galois_elements(std::size_t n, KeyMode mode,
                                                 const std::set<std::int64_t>& steps = {});

class GaloisKeys {
 public:
  GaloisKeys() = default;
  GaloisKeys(KeyMode mode, KeyOwner owner) : mode_(mode), owner_(owner) {}

  KeyMode mode() const { return mode_; }
  KeyOwner owner() const { return owner_; }
  std::size_t size() const { return keys_.size(); }
  bool contains(std::uint64_t g) const { return keys_.count(g) != 0; }
  // Throws MissingKeyError naming the element.
  const EvaluationKey& at(std::uint64_t g) const;
  void insert(EvaluationKey key);
  std::vector<std::uint64_t> elements() const;

  void serialize(ByteWriter& out) const;
  static GaloisKeys deserialize(ByteReader& in, const Context& ctx);
  Bytes to_bytes() const {
    ByteWriter w;
    serialize(w);
    return w.take();
  }

 private:
  KeyMode mode_ = KeyMode::kLogKeys;
  KeyOwner owner_ = KeyOwner::kNone;
  std::map<std::uint64_t, EvaluationKey> keys_;
};

GaloisKeys make_galois_keys(const Context& ctx, const SecretKey& sk, KeyMode mode,
                            std::uint64_t base, Prng& prng,
                            const std::set<std::int64_t>& steps = {});

}  // namespace trident::bfv

#endif  // TRIDENT_BFV_KEYS_HPP_
