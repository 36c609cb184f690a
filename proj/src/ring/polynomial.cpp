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

#include "trident/ring/polynomial.hpp"

#include <algorithm>
#include <string>

#include "trident/common/error.hpp"

namespace trident {

RingContext::RingContext(std::size_t n, std::uint64_t q) : n_(n), mod_(q) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw ParameterError("ring degree must be a power of two, got " + std::to_string(n));
  }
  if (q % (2 * n) == 1) ntt_.emplace(n, mod_);
}

std::shared_ptr<const RingContext> RingContext::create(std::size_t n, std::uint64_t q) {
  return std::shared_ptr<const RingContext>(new RingContext(n, q));
}

const NttTables& RingContext::ntt() const {
  if (!ntt_) {
    throw ParameterError("modulus " + std::to_string(mod_.value()) +
                         " has no primitive 2n-th root of unity for n = " + std::to_string(n_));
  }
  return *ntt_;
}

Polynomial Polynomial::zero(RingContextPtr ctx, Domain domain) {
  const auto n = ctx->n();
  return Polynomial(std::move(ctx), std::vector<std::uint64_t>(n, 0), domain);
}

Polynomial Polynomial::from_coeffs(RingContextPtr ctx, std::vector<std::uint64_t> coeffs,
                                   Domain domain) {
  if (coeffs.size() != ctx->n()) {
    throw ParameterError("polynomial length " + std::to_string(coeffs.size()) +
                         " != ring degree " + std::to_string(ctx->n()));
  }
  const auto q = ctx->modulus().value();
  for (auto c : coeffs) {
    if (c >= q) throw ParameterError("coefficient out of range [0, q)");
  }
  return Polynomial(std::move(ctx), std::move(coeffs), domain);
}

Polynomial Polynomial::from_signed(RingContextPtr ctx, std::span<const std::int64_t> coeffs) {
  if (coeffs.size() != ctx->n()) throw ParameterError("polynomial length != ring degree");
  std::vector<std::uint64_t> out(coeffs.size());
  const auto& m = ctx->modulus();
  std::transform(coeffs.begin(), coeffs.end(), out.begin(),
                 [&](std::int64_t v) { return m.from_signed(v); });
  return Polynomial(std::move(ctx), std::move(out), Domain::kCoefficient);
}

void Polynomial::check_compatible(const Polynomial& other, const char* op) const {
  if (ctx_ != other.ctx_ &&
      (n() != other.n() || modulus().value() != other.modulus().value())) {
    throw ParameterError(std::string(op) + ": mismatched ring parameters");
  }
  if (domain_ != other.domain_) throw ParameterError(std::string(op) + ": mismatched domains");
}

Polynomial Polynomial::to_evaluation() const {
  if (domain_ == Domain::kEvaluation) return *this;
  Polynomial out = *this;
  ctx_->ntt().forward(out.coeffs_);
  out.domain_ = Domain::kEvaluation;
  return out;
}

Polynomial Polynomial::to_coefficient() const {
  if (domain_ == Domain::kCoefficient) return *this;
  Polynomial out = *this;
  ctx_->ntt().inverse(out.coeffs_);
  out.domain_ = Domain::kCoefficient;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_compatible(other, "add");
  const auto& m = modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = m.add(coeffs_[i], other.coeffs_[i]);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_compatible(other, "sub");
  const auto& m = modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = m.sub(coeffs_[i], other.coeffs_[i]);
  return *this;
}

Polynomial& Polynomial::mul_pointwise_inplace(const Polynomial& other) {
  check_compatible(other, "mul_pointwise");
  if (domain_ != Domain::kEvaluation) throw ParameterError("mul_pointwise: coefficient domain");
  const auto& m = modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = m.mul(coeffs_[i], other.coeffs_[i]);
  return *this;
}

Polynomial& Polynomial::fma_pointwise(const Polynomial& a, const Polynomial& b) {
  check_compatible(a, "fma_pointwise");
  check_compatible(b, "fma_pointwise");
  if (domain_ != Domain::kEvaluation) throw ParameterError("fma_pointwise: coefficient domain");
  const auto& m = modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] = m.add(coeffs_[i], m.mul(a.coeffs_[i], b.coeffs_[i]));
  }
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  const auto& m = modulus();
  for (auto& c : out.coeffs_) c = m.neg(c);
  return out;
}

Polynomial Polynomial::scaled(std::uint64_t scalar) const {
  Polynomial out = *this;
  const auto& m = modulus();
  const std::uint64_t s = m.reduce(scalar);
  const std::uint64_t ss = m.shoup(s);
  for (auto& c : out.coeffs_) c = m.mul_shoup(c, s, ss);
  return out;
}

Polynomial Polynomial::automorphism(std::uint64_t galois_element) const {
  if (domain_ != Domain::kCoefficient) throw ParameterError("automorphism: evaluation domain");
  const std::size_t n = coeffs_.size();
  const std::uint64_t two_n = 2 * n;
  if (galois_element % 2 == 0 || galois_element >= two_n) {
    throw ParameterError("galois element must be odd and below 2n");
  }
  const auto& m = modulus();
  Polynomial out = zero(ctx_);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t j = (i * galois_element) % two_n;
    if (j < n) {
      out.coeffs_[j] = coeffs_[i];
    } else {
      out.coeffs_[j - n] = m.neg(coeffs_[i]);
    }
  }
  return out;
}

std::vector<std::int64_t> Polynomial::centered() const {
  if (domain_ != Domain::kCoefficient) return to_coefficient().centered();
  std::vector<std::int64_t> out(coeffs_.size());
  const auto& m = modulus();
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(),
                 [&](std::uint64_t c) { return m.centered(c); });
  return out;
}

std::uint64_t Polynomial::inf_norm() const {
  std::uint64_t best = 0;
  for (auto v : centered()) {
    const std::uint64_t a = v < 0 ? static_cast<std::uint64_t>(-v) : static_cast<std::uint64_t>(v);
    best = std::max(best, a);
  }
  return best;
}

void Polynomial::serialize(ByteWriter& out) const {
  const Polynomial& p = domain_ == Domain::kCoefficient ? *this : to_coefficient();
  out.u64(p.coeffs_.size());
  for (auto c : p.coeffs_) out.u64(c);
}

Polynomial Polynomial::deserialize(ByteReader& in, RingContextPtr ctx) {
  const std::uint64_t count = in.u64();
  if (count != ctx->n()) throw IntegrityError("polynomial length does not match ring degree");
  std::vector<std::uint64_t> coeffs(count);
  const auto q = ctx->modulus().value();
  for (auto& c : coeffs) {
    c = in.u64();
    if (c >= q) throw IntegrityError("serialized coefficient out of range");
  }
  return Polynomial(std::move(ctx), std::move(coeffs), Domain::kCoefficient);
}

Polynomial schoolbook_mul(const Polynomial& a, const Polynomial& b) {
  if (a.domain() != Domain::kCoefficient || b.domain() != Domain::kCoefficient) {
    throw ParameterError("schoolbook_mul: coefficient domain required");
  }
  if (a.n() != b.n() || a.modulus().value() != b.modulus().value()) {
    throw ParameterError("poly_mul: mismatched ring parameters");
  }
  const std::size_t n = a.n();
  const auto& m = a.modulus();
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t prod = m.mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = m.add(out[k], prod);
      } else {
        out[k - n] = m.sub(out[k - n], prod);
      }
    }
  }
  return Polynomial::from_coeffs(a.context(), std::move(out));
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.n() != b.n() || a.modulus().value() != b.modulus().value()) {
    throw ParameterError("poly_mul: mismatched ring parameters");
  }
  if (!a.context()->has_ntt()) return schoolbook_mul(a.to_coefficient(), b.to_coefficient());
  Polynomial ea = a.to_evaluation();
  ea.mul_pointwise_inplace(b.to_evaluation());
  return ea.to_coefficient();
}

Polynomial ntt_forward(const Polynomial& p) {
  if (p.domain() != Domain::kCoefficient) throw ParameterError("ntt_forward: already evaluated");
  return p.to_evaluation();
}

Polynomial ntt_inverse(const Polynomial& p) {
  if (p.domain() != Domain::kEvaluation) throw ParameterError("ntt_inverse: coefficient input");
  return p.to_coefficient();
}

}  // namespace trident
