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

#include "trident/ring/sampling.hpp"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "trident/common/error.hpp"

namespace trident {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error(ErrorKind::kIntegrity, "libsodium initialization failed");
}

}  // namespace

Prng::Prng(const Seed& seed) : seed_(seed) { ensure_sodium(); }

Prng::Prng(std::uint64_t seed, std::string_view domain) {
  ensure_sodium();
  std::uint8_t in[8];
  for (int i = 0; i < 8; ++i) in[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, seed_.size());
  crypto_generichash_update(&st, in, sizeof(in));
  crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(domain.data()),
                            domain.size());
  crypto_generichash_final(&st, seed_.data(), seed_.size());
}

Prng Prng::derive(std::string_view label) const {
  Seed child;
  crypto_generichash(child.data(), child.size(), reinterpret_cast<const unsigned char*>(label.data()),
                     label.size(), seed_.data(), seed_.size());
  return Prng(child);
}

Seed Prng::next_seed() {
  Seed s;
  fill(s);
  return s;
}

void Prng::refill() {
  std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {};
  std::uint64_t ctr = block_counter_++;
  std::memcpy(nonce, &ctr, sizeof(ctr));
  crypto_stream_chacha20(buffer_.data(), buffer_.size(), nonce, seed_.data());
  pos_ = 0;
}

void Prng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buffer_.size()) refill();
    const std::size_t take = std::min(out.size() - done, buffer_.size() - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

std::uint64_t Prng::next_u64() {
  if (buffer_.size() - pos_ < 8) refill();
  std::uint64_t v;
  std::memcpy(&v, buffer_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

std::uint64_t Prng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform_below: zero bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

GaussianSampler::GaussianSampler(double sigma) : sigma_(sigma) {
  if (!(sigma > 0)) throw ParameterError("gaussian sigma must be positive");
  bound_ = static_cast<std::int64_t>(std::ceil(6.0 * sigma));
  std::vector<long double> weight(bound_ + 1);
  long double total = 0;
  for (std::int64_t k = 0; k <= bound_; ++k) {
    const long double x = static_cast<long double>(k);
    weight[k] = std::exp(-x * x / (2.0L * sigma * sigma)) * (k == 0 ? 1.0L : 2.0L);
    total += weight[k];
  }
  cdt_.resize(bound_ + 1);
  long double acc = 0;
  const long double scale = 18446744073709551615.0L;
  for (std::int64_t k = 0; k <= bound_; ++k) {
    acc += weight[k];
    const long double v = acc / total * scale;
    cdt_[k] = v >= scale ? std::numeric_limits<std::uint64_t>::max()
                         : static_cast<std::uint64_t>(v);
  }
  cdt_.back() = std::numeric_limits<std::uint64_t>::max();
}

std::int64_t GaussianSampler::sample(Prng& prng) const {
  const std::uint64_t u = prng.next_u64();
  std::int64_t k = 0;
  while (k < bound_ && u >= cdt_[k]) ++k;
  if (k == 0) return 0;
  return prng.next_bit() ? -k : k;
}

Polynomial sample_uniform(const RingContextPtr& ctx, Prng& prng) {
  std::vector<std::uint64_t> c(ctx->n());
  const auto q = ctx->modulus().value();
  for (auto& x : c) x = prng.uniform_below(q);
  return Polynomial::from_coeffs(ctx, std::move(c));
}

Polynomial sample_gaussian(const RingContextPtr& ctx, const GaussianSampler& chi, Prng& prng) {
  std::vector<std::int64_t> c(ctx->n());
  for (auto& x : c) x = chi.sample(prng);
  return Polynomial::from_signed(ctx, c);
}

Polynomial sample_ternary(const RingContextPtr& ctx, Prng& prng) {
  std::vector<std::int64_t> c(ctx->n());
  for (auto& x : c) x = static_cast<std::int64_t>(prng.uniform_below(3)) - 1;
  return Polynomial::from_signed(ctx, c);
}

}  // namespace trident
