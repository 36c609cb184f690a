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

#include "trident/gc/ot.hpp"

#include <sodium.h>

#include <cstring>

#include "trident/common/error.hpp"

namespace trident::gc {

namespace {

using Key = std::array<std::uint8_t, crypto_secretbox_KEYBYTES>;

Key derive_key(std::uint64_t index, const Point& A, const Point& B, const Point& shared) {
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, crypto_secretbox_KEYBYTES);
  std::uint8_t idx[8];
  std::memcpy(idx, &index, 8);
  crypto_generichash_update(&st, idx, 8);
  crypto_generichash_update(&st, A.data(), A.size());
  crypto_generichash_update(&st, B.data(), B.size());
  crypto_generichash_update(&st, shared.data(), shared.size());
  Key k;
  crypto_generichash_final(&st, k.data(), k.size());
  return k;
}

Point mul(const Scalar& s, const Point& p) {
  Point out;
  if (crypto_scalarmult_ristretto255(out.data(), s.data(), p.data()) != 0) {
    throw IntegrityError("ot: degenerate group element");
  }
  return out;
}

void check_point(const Point& p) {
  if (crypto_core_ristretto255_is_valid_point(p.data()) != 1) {
    throw IntegrityError("ot: invalid group element");
  }
}

void seal(std::uint8_t* out, const Block& label, const Key& k) {
  std::uint8_t msg[kLabelBytes];
  std::memcpy(msg, &label.lo, 8);
  std::memcpy(msg + 8, &label.hi, 8);
  const std::uint8_t nonce[crypto_secretbox_NONCEBYTES] = {};
  crypto_secretbox_easy(out, msg, sizeof msg, nonce, k.data());
}

// count scalars, from libsodium's generator or expanded from a seed.
std::vector<Scalar> draw_scalars(std::size_t count, const Seed* seed) {
  std::vector<Scalar> out(count);
  if (!seed) {
    for (auto& s : out) crypto_core_ristretto255_scalar_random(s.data());
    return out;
  }
  std::vector<std::uint8_t> wide(count * crypto_core_ristretto255_NONREDUCEDSCALARBYTES);
  randombytes_buf_deterministic(wide.data(), wide.size(), seed->data());
  for (std::size_t i = 0; i < count; ++i) {
    crypto_core_ristretto255_scalar_reduce(out[i].data(),
                                           wide.data() + i * crypto_core_ristretto255_NONREDUCEDSCALARBYTES);
  }
  return out;
}

bool open(Block& label, const std::uint8_t* box, const Key& k) {
  std::uint8_t msg[kLabelBytes];
  const std::uint8_t nonce[crypto_secretbox_NONCEBYTES] = {};
  if (crypto_secretbox_open_easy(msg, box, kOtBoxBytes, nonce, k.data()) != 0) return false;
  std::memcpy(&label.lo, msg, 8);
  std::memcpy(&label.hi, msg + 8, 8);
  return true;
}

}  // namespace

const char* to_string(LabelDelivery d) { return d == LabelDelivery::kDealer ? "dealer" : "base_ot"; }

LabelDelivery parse_label_delivery(const std::string& s) {
  if (s == "dealer") return LabelDelivery::kDealer;
  if (s == "base_ot" || s == "base-ot") return LabelDelivery::kBaseOt;
  throw ParameterError("unknown label delivery '" + s + "' (expected dealer or base_ot)");
}

std::vector<Block> dealer_deliver(std::span<const std::array<Block, 2>> pairs,
                                  std::span<const std::uint8_t> choices) {
  if (pairs.size() != choices.size()) throw ParameterError("dealer: choice count mismatch");
  std::vector<Block> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out.push_back(pairs[i][choices[i] & 1]);
  return out;
}

OtSender OtSender::create(const Seed* seed) {
  if (sodium_init() < 0) throw ProtocolError("libsodium initialisation failed");
  OtSender s;
  s.a = draw_scalars(1, seed).front();
  crypto_scalarmult_ristretto255_base(s.A.data(), s.a.data());
  return s;
}

OtReceiver::OtReceiver(const Point& A, std::span<const std::uint8_t> choices, const Seed* seed)
    : A_(A), choices_(choices.begin(), choices.end()) {
  if (sodium_init() < 0) throw ProtocolError("libsodium initialisation failed");
  check_point(A_);
  b_ = draw_scalars(choices_.size(), seed);
  request_.B.resize(choices_.size());
  for (std::size_t i = 0; i < choices_.size(); ++i) {
    Point bg;
    crypto_scalarmult_ristretto255_base(bg.data(), b_[i].data());
    if (choices_[i] & 1) {
      crypto_core_ristretto255_add(request_.B[i].data(), A_.data(), bg.data());
    } else {
      request_.B[i] = bg;
    }
  }
}

OtResponse ot_respond(const OtSender& s, const OtRequest& req,
                      std::span<const std::array<Block, 2>> pairs) {
  if (req.B.size() != pairs.size()) throw ProtocolError("ot: request size mismatch");
  OtResponse resp;
  resp.boxes.resize(pairs.size());
  const Point aa = mul(s.a, s.A);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Point& B = req.B[i];
    check_point(B);
    if (B == s.A) throw IntegrityError("ot: degenerate group element");
    // a(B - A) = aB - aA.
    const Point ab = mul(s.a, B);
    Point ab_minus_aa;
    crypto_core_ristretto255_sub(ab_minus_aa.data(), ab.data(), aa.data());
    const Key k0 = derive_key(i, s.A, B, ab);
    const Key k1 = derive_key(i, s.A, B, ab_minus_aa);
    seal(resp.boxes[i].data(), pairs[i][0], k0);
    seal(resp.boxes[i].data() + kOtBoxBytes, pairs[i][1], k1);
  }
  return resp;
}

std::vector<Block> OtReceiver::finish(const OtResponse& resp) const {
  if (resp.boxes.size() != choices_.size()) throw ProtocolError("ot: response size mismatch");
  std::vector<Block> out(choices_.size());
  for (std::size_t i = 0; i < choices_.size(); ++i) {
    // b*A = a*(B - c*A) for the chosen c.
    const Key k = derive_key(i, A_, request_.B[i], mul(b_[i], A_));
    const std::uint8_t* box = resp.boxes[i].data() + (choices_[i] & 1) * kOtBoxBytes;
    if (!open(out[i], box, k)) throw IntegrityError("ot: label box failed to open");
  }
  return out;
}

Bytes OtRequest::serialize() const {
  ByteWriter w;
  w.u64(B.size());
  for (const auto& p : B) w.bytes(p);
  return w.take();
}

OtRequest OtRequest::deserialize(ByteReader& in) {
  const auto n = in.u64();
  if (n > in.remaining() / kOtPointBytes) throw IntegrityError("ot: truncated request");
  OtRequest r;
  r.B.resize(n);
  for (auto& p : r.B) {
    const auto b = in.bytes(kOtPointBytes);
    std::copy(b.begin(), b.end(), p.begin());
  }
  return r;
}

Bytes OtResponse::serialize() const {
  ByteWriter w;
  w.u64(boxes.size());
  for (const auto& b : boxes) w.bytes(b);
  return w.take();
}

OtResponse OtResponse::deserialize(ByteReader& in) {
  const auto n = in.u64();
  if (n > in.remaining() / (2 * kOtBoxBytes)) throw IntegrityError("ot: truncated response");
  OtResponse r;
  r.boxes.resize(n);
  for (auto& box : r.boxes) {
    const auto b = in.bytes(2 * kOtBoxBytes);
    std::copy(b.begin(), b.end(), box.begin());
  }
  return r;
}

}  // namespace trident::gc
