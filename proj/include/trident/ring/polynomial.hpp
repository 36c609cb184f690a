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

#ifndef TRIDENT_RING_POLYNOMIAL_HPP_
#define TRIDENT_RING_POLYNOMIAL_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "trident/common/bytes.hpp"
#include "trident/ring/modulus.hpp"
#include "trident/ring/ntt.hpp"

namespace trident {

// Degree and modulus of a ring Z_q[x]/(x^n + 1). NTT tables are present only
// when q ≡ 1 (mod 2n); otherwise multiplication falls back to schoolbook.
class RingContext {
 public:
  static std::shared_ptr<const RingContext> create(std::size_t n, std::uint64_t q);

  std::size_t n() const { return n_; }
  const Modulus& modulus() const { return mod_; }
  bool has_ntt() const { return ntt_.has_value(); }
  // Throws ParameterError if the modulus has no primitive 2n-th root of unity.
  const NttTables& ntt() const;

 private:
  RingContext(std::size_t n, std::uint64_t q);
  std::size_t n_;
  Modulus mod_;
  std::optional<NttTables> ntt_;
};

using RingContextPtr = std::shared_ptr<const RingContext>;

enum class Domain : std::uint8_t { kCoefficient = 0, kEvaluation = 1 };

// An element of Z_q[x]/(x^n + 1) with every coefficient in [0, q). The domain
// flag records whether coefficients or NTT evaluations are stored; binary
// operations reject mismatched domains.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial zero(RingContextPtr ctx, Domain domain = Domain::kCoefficient);
  // Throws ParameterError when the length is not n or a value is >= q.
  static Polynomial from_coeffs(RingContextPtr ctx, std::vector<std::uint64_t> coeffs,
                                Domain domain = Domain::kCoefficient);
  static Polynomial from_signed(RingContextPtr ctx, std::span<const std::int64_t> coeffs);

  const RingContextPtr& context() const { return ctx_; }
  std::size_t n() const { return coeffs_.size(); }
  const Modulus& modulus() const { return ctx_->modulus(); }
  Domain domain() const { return domain_; }
  std::span<const std::uint64_t> coeffs() const { return coeffs_; }
  std::uint64_t operator[](std::size_t i) const { return coeffs_[i]; }
  bool empty() const { return coeffs_.empty(); }

  Polynomial to_evaluation() const;
  Polynomial to_coefficient() const;
  Polynomial in_domain(Domain d) const {
    return d == Domain::kEvaluation ? to_evaluation() : to_coefficient();
  }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  // Pointwise product; both operands must be in the evaluation domain.
  Polynomial& mul_pointwise_inplace(const Polynomial& other);
  // this += a ⊙ b in the evaluation domain.
  Polynomial& fma_pointwise(const Polynomial& a, const Polynomial& b);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const;
  Polynomial scaled(std::uint64_t scalar) const;

  // x -> x^g for odd g, coefficient domain only.
  Polynomial automorphism(std::uint64_t galois_element) const;

  // Centered lift of every coefficient into (-q/2, q/2] (coefficient domain).
  std::vector<std::int64_t> centered() const;
  // Largest centered coefficient magnitude.
  std::uint64_t inf_norm() const;

  // 8-byte little-endian count followed by count 8-byte little-endian words.
  // Always written in coefficient form.
  void serialize(ByteWriter& out) const;
  static Polynomial deserialize(ByteReader& in, RingContextPtr ctx);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.domain_ == b.domain_ && a.coeffs_ == b.coeffs_ &&
           a.modulus().value() == b.modulus().value();
  }

 private:
  Polynomial(RingContextPtr ctx, std::vector<std::uint64_t> coeffs, Domain domain)
      : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)), domain_(domain) {}
  void check_compatible(const Polynomial& other, const char* op) const;

  RingContextPtr ctx_;
  std::vector<std::uint64_t> coeffs_;
  Domain domain_ = Domain::kCoefficient;
};

// Negacyclic product. Uses the NTT when the ring supports it and the
// schoolbook O(n^2) product otherwise. The result is in coefficient form.
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial schoolbook_mul(const Polynomial& a, const Polynomial& b);

Polynomial ntt_forward(const Polynomial& p);
Polynomial ntt_inverse(const Polynomial& p);

}  // namespace trident

#endif  // TRIDENT_RING_POLYNOMIAL_HPP_
