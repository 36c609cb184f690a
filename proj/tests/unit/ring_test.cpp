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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "trident/common/error.hpp"
#include "trident/ring/batch_encoder.hpp"
#include "trident/ring/decompose.hpp"
#include "trident/ring/modulus.hpp"
#include "trident/ring/params.hpp"
#include "trident/ring/polynomial.hpp"
#include "trident/ring/sampling.hpp"

namespace trident {
namespace {

// O(n^2) negacyclic product over the integers, reduced mod q at the end.
// Independent of Modulus and the NTT.
std::vector<std::uint64_t> SchoolbookOracle(const std::vector<std::uint64_t>& a,
                                            const std::vector<std::uint64_t>& b,
                                            std::uint64_t q) {
  const std::size_t n = a.size();
  std::vector<__int128> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const __int128 prod = static_cast<__int128>(a[i] % q) * (b[j] % q) % q;
      if (i + j < n) {
        acc[i + j] += prod;
      } else {
        acc[i + j - n] -= prod;
      }
    }
  }
  std::vector<std::uint64_t> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    __int128 r = acc[k] % static_cast<__int128>(q);
    if (r < 0) r += q;
    out[k] = static_cast<std::uint64_t>(r);
  }
  return out;
}

std::vector<std::uint64_t> RandomCoeffs(std::mt19937_64& rng, std::size_t n, std::uint64_t q) {
  std::uniform_int_distribution<std::uint64_t> dist(0, q - 1);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

std::vector<std::uint64_t> ToVector(const Polynomial& p) {
  return {p.coeffs().begin(), p.coeffs().end()};
}

TEST(ModulusTest, Reduce128MatchesDivision) {
  std::mt19937_64 rng(7);
  for (std::uint64_t q : std::vector<std::uint64_t>{17, 97, 307201, RingParams::toy().q, (1ULL << 61) - 1}) {
    Modulus m(q);
    std::uniform_int_distribution<std::uint64_t> dist(0, q - 1);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t a = dist(rng), b = dist(rng);
      ASSERT_EQ(m.mul(a, b), static_cast<std::uint64_t>(static_cast<u128>(a) * b % q));
    }
  }
}

TEST(ModulusTest, RejectsOversizedModulus) {
  EXPECT_THROW(Modulus(1ULL << 62), ParameterError);
  EXPECT_THROW(Modulus(1), ParameterError);
}

TEST(ModulusTest, PrimeSearch) {
  EXPECT_TRUE(is_prime(97));
  EXPECT_FALSE(is_prime(91));
  EXPECT_TRUE(is_prime(RingParams::toy().q));
  const auto p = find_prime_congruent_one(20, 64);
  EXPECT_TRUE(is_prime(p));
  EXPECT_EQ(p % 64, 1u);
  EXPECT_LT(p, 1u << 20);
}

TEST(RingParamsTest, PresetsValidate) {
  RingParams::toy().validate();
  RingParams::paper().validate();
  EXPECT_EQ(RingParams::toy().t_bits(), 19);
  EXPECT_EQ(RingParams::paper().t_bits(), 19);
  EXPECT_EQ(Modulus(RingParams::paper().q).bits(), 60);
  EXPECT_THROW(RingParams::preset("huge"), ParameterError);
}

TEST(RingParamsTest, InvariantViolations) {
  RingParams p = RingParams::toy();
  p.t = 307199;  // not 1 mod 2n
  EXPECT_THROW(p.validate(), ParameterError);
  p = RingParams::toy();
  p.n = 1000;
  EXPECT_THROW(p.validate(), ParameterError);
  p = RingParams::toy();
  p.sigma = 0;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(NttTest, ZeroMapsToZero) {
  auto ctx = RingContext::create(8, 97);
  const auto z = Polynomial::zero(ctx);
  const auto e = ntt_forward(z);
  for (auto c : e.coeffs()) EXPECT_EQ(c, 0u);
  EXPECT_EQ(e.domain(), Domain::kEvaluation);
}

TEST(NttTest, RoundtripSmall) {
  auto ctx = RingContext::create(8, 97);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto p = Polynomial::from_coeffs(ctx, RandomCoeffs(rng, 8, 97));
    EXPECT_EQ(ntt_inverse(ntt_forward(p)), p);
  }
}

TEST(NttTest, MissingRootIsParameterError) {
  auto ctx = RingContext::create(8, 101);  // 101 ≢ 1 (mod 16)
  const auto p = Polynomial::zero(ctx);
  EXPECT_FALSE(ctx->has_ntt());
  EXPECT_THROW(ntt_forward(p), ParameterError);
}

TEST(NttTest, DomainMismatchRejected) {
  auto ctx = RingContext::create(8, 97);
  const auto p = Polynomial::zero(ctx);
  EXPECT_THROW(ntt_inverse(p), ParameterError);
  EXPECT_THROW(p + ntt_forward(p), ParameterError);
}

// Pointwise product in the NTT domain against the schoolbook oracle.
struct NttCase {
  std::size_t n;
  std::uint64_t q;
  int trials;
};

class NttProductTest : public ::testing::TestWithParam<NttCase> {};

TEST_P(NttProductTest, PointwiseProductMatchesSchoolbook) {
  const auto [n, q, trials] = GetParam();
  auto ctx = RingContext::create(n, q);
  std::mt19937_64 rng(n * 31 + q);
  for (int i = 0; i < trials; ++i) {
    const auto av = RandomCoeffs(rng, n, q);
    const auto bv = RandomCoeffs(rng, n, q);
    const auto a = Polynomial::from_coeffs(ctx, av);
    const auto b = Polynomial::from_coeffs(ctx, bv);
    auto prod = ntt_forward(a);
    prod.mul_pointwise_inplace(ntt_forward(b));
    ASSERT_EQ(ToVector(ntt_inverse(prod)), SchoolbookOracle(av, bv, q)) << "trial " << i;
    ASSERT_EQ(ntt_inverse(ntt_forward(a)), a);
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, NttProductTest,
                         ::testing::Values(NttCase{4, 97, 1000}, NttCase{8, 97, 1000},
                                           NttCase{1024, RingParams::toy().q, 12},
                                           NttCase{2048, RingParams::toy().q, 6},
                                           NttCase{4096, RingParams::paper().q, 2}));

TEST(PolyMulTest, IdentityAndShift) {
  auto ctx = RingContext::create(4, 97);
  const auto a = Polynomial::from_coeffs(ctx, {1, 2, 3, 4});
  const auto one = Polynomial::from_coeffs(ctx, {1, 0, 0, 0});
  const auto x = Polynomial::from_coeffs(ctx, {0, 1, 0, 0});
  EXPECT_EQ(poly_mul(a, one), a);
  EXPECT_EQ(ToVector(poly_mul(a, x)), (std::vector<std::uint64_t>{97 - 4, 1, 2, 3}));
}

TEST(PolyMulTest, SchoolbookFallbackWithoutNtt) {
  auto ctx = RingContext::create(8, 101);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto av = RandomCoeffs(rng, 8, 101), bv = RandomCoeffs(rng, 8, 101);
    EXPECT_EQ(ToVector(poly_mul(Polynomial::from_coeffs(ctx, av), Polynomial::from_coeffs(ctx, bv))),
              SchoolbookOracle(av, bv, 101));
  }
}

TEST(PolyMulTest, MismatchedParameters) {
  auto c1 = RingContext::create(8, 97);
  auto c2 = RingContext::create(8, 17);
  EXPECT_THROW(poly_mul(Polynomial::zero(c1), Polynomial::zero(c2)), ParameterError);
  auto c3 = RingContext::create(4, 97);
  EXPECT_THROW(poly_mul(Polynomial::zero(c1), Polynomial::zero(c3)), ParameterError);
}

TEST(PolynomialTest, RejectsOutOfRangeCoefficients) {
  auto ctx = RingContext::create(4, 97);
  EXPECT_THROW(Polynomial::from_coeffs(ctx, {0, 97, 0, 0}), ParameterError);
  EXPECT_THROW(Polynomial::from_coeffs(ctx, {0, 1, 0}), ParameterError);
}

TEST(PolynomialTest, AutomorphismMatchesSubstitution) {
  // a(x^3) for a = 1 + 2x + 3x^2 + 4x^3 in Z_97[x]/(x^4+1):
  // x^3 -> x^3, x^6 -> -x^2, x^9 -> x.
  auto ctx = RingContext::create(4, 97);
  const auto a = Polynomial::from_coeffs(ctx, {1, 2, 3, 4});
  EXPECT_EQ(ToVector(a.automorphism(3)), (std::vector<std::uint64_t>{1, 4, 97 - 3, 2}));
  EXPECT_THROW(a.automorphism(2), ParameterError);
}

TEST(PolynomialTest, SerializationLayout) {
  auto ctx = RingContext::create(4, 97);
  const auto a = Polynomial::from_coeffs(ctx, {1, 2, 96, 4});
  ByteWriter w;
  a.serialize(w);
  const Bytes& b = w.view();
  ASSERT_EQ(b.size(), 8u + 4 * 8);
  EXPECT_EQ(b[0], 4);
  for (int i = 1; i < 8; ++i) EXPECT_EQ(b[i], 0);
  EXPECT_EQ(b[8 + 2 * 8], 96);
  ByteReader r(b);
  EXPECT_EQ(Polynomial::deserialize(r, ctx), a);
  EXPECT_TRUE(r.done());

  Bytes truncated(b.begin(), b.end() - 1);
  ByteReader rt(truncated);
  EXPECT_THROW(Polynomial::deserialize(rt, ctx), IntegrityError);
}

TEST(BatchEncoderTest, ConstantVectorIsConstantPolynomial) {
  auto ctx = RingContext::create(8, 17);
  BatchEncoder enc(ctx);
  const auto p = enc.encode(SlotVector{std::vector<std::uint64_t>(8, 5)});
  EXPECT_EQ(ToVector(p), (std::vector<std::uint64_t>{5, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(BatchEncoderTest, RoundtripAndHomomorphism) {
  auto ctx = RingContext::create(8, 17);
  BatchEncoder enc(ctx);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    SlotVector u{RandomCoeffs(rng, 8, 17)}, v{RandomCoeffs(rng, 8, 17)};
    const auto pu = enc.encode(u), pv = enc.encode(v);
    ASSERT_EQ(enc.decode(pu), u);
    SlotVector sum{std::vector<std::uint64_t>(8)}, prod{std::vector<std::uint64_t>(8)};
    for (int i = 0; i < 8; ++i) {
      sum.values[i] = (u.values[i] + v.values[i]) % 17;
      prod.values[i] = (u.values[i] * v.values[i]) % 17;
    }
    ASSERT_EQ(enc.decode(pu + pv), sum);
    ASSERT_EQ(enc.decode(poly_mul(pu, pv)), prod);
  }
}

TEST(BatchEncoderTest, GeneratorThreeRotatesRows) {
  auto ctx = RingContext::create(16, 97);  // 97 ≡ 1 (mod 32)
  BatchEncoder enc(ctx);
  SlotVector v{std::vector<std::uint64_t>(16)};
  for (int i = 0; i < 16; ++i) v.values[i] = i;
  const auto p = enc.encode(v);
  const auto rotated = enc.decode(p.automorphism(3 * 3));  // left by 2
  for (int c = 0; c < 8; ++c) {
    EXPECT_EQ(rotated.at(0, c), static_cast<std::uint64_t>((c + 2) % 8));
    EXPECT_EQ(rotated.at(1, c), static_cast<std::uint64_t>(8 + (c + 2) % 8));
  }
  const auto swapped = enc.decode(p.automorphism(2 * 16 - 1));
  for (int c = 0; c < 8; ++c) EXPECT_EQ(swapped.at(0, c), v.at(1, c));
}

TEST(BatchEncoderTest, RejectsOutOfRangeSlot) {
  BatchEncoder enc(RingContext::create(8, 17));
  SlotVector v{std::vector<std::uint64_t>(8, 0)};
  v.values[3] = 17;
  EXPECT_THROW(enc.encode(v), ParameterError);
  EXPECT_THROW(enc.encode(SlotVector{std::vector<std::uint64_t>(4)}), ParameterError);
}

TEST(DecomposeTest, DigitCount) {
  EXPECT_EQ(digit_count(97, 2), 7);
  EXPECT_EQ(digit_count(97, 97), 1);
  EXPECT_EQ(digit_count(RingParams::toy().q, 1ULL << 20), 3);
  EXPECT_THROW(digit_count(97, 1), ParameterError);
}

TEST(DecomposeTest, ZeroAndDegenerateBase) {
  auto ctx = RingContext::create(8, 97);
  for (const auto& d : base_decompose(Polynomial::zero(ctx), 4)) {
    for (auto c : d.coeffs()) EXPECT_EQ(c, 0u);
  }
  std::mt19937_64 rng(5);
  const auto p = Polynomial::from_coeffs(ctx, RandomCoeffs(rng, 8, 97));
  const auto single = base_decompose(p, 97);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], p);
}

TEST(DecomposeTest, RecompositionIsExact) {
  std::mt19937_64 rng(9);
  for (std::uint64_t q : std::vector<std::uint64_t>{97, RingParams::toy().q}) {
    auto ctx = RingContext::create(8, q);
    for (std::uint64_t w : {2ULL, 3ULL, 1ULL << 8, 1000ULL}) {
      for (int trial = 0; trial < 50; ++trial) {
        const auto p = Polynomial::from_coeffs(ctx, RandomCoeffs(rng, 8, q));
        const auto digits = base_decompose(p, w);
        ASSERT_EQ(static_cast<int>(digits.size()), digit_count(q, w));
        for (std::size_t j = 0; j < 8; ++j) {
          u128 acc = 0, power = 1;
          for (const auto& d : digits) {
            ASSERT_LT(d[j], w);
            acc += power * d[j];
            power *= w;
          }
          ASSERT_EQ(static_cast<std::uint64_t>(acc), p[j]);
        }
      }
    }
  }
}

TEST(SamplingTest, BoundsAndDeterminism) {
  auto ctx = RingContext::create(2048, RingParams::toy().q);
  GaussianSampler chi(3.2);
  EXPECT_EQ(chi.bound(), 20);
  Prng a(42, "sampling"), b(42, "sampling");
  const auto ga = sample_gaussian(ctx, chi, a);
  const auto gb = sample_gaussian(ctx, chi, b);
  EXPECT_EQ(ga, gb);
  EXPECT_LE(ga.inf_norm(), 20u);
  const auto u = sample_uniform(ctx, a);
  for (auto c : u.coeffs()) EXPECT_LT(c, ctx->modulus().value());
  const auto t = sample_ternary(ctx, a);
  EXPECT_LE(t.inf_norm(), 1u);
  Prng c(43, "sampling");
  EXPECT_NE(sample_uniform(ctx, c), sample_uniform(ctx, b));
}

TEST(SamplingTest, GaussianMoments) {
  GaussianSampler chi(3.2);
  Prng prng(1, "moments");
  double sum = 0, sq = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double x = static_cast<double>(chi.sample(prng));
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / N, 0.0, 0.05);
  EXPECT_NEAR(std::sqrt(sq / N), 3.2, 0.05);
}

TEST(SamplingTest, DerivedStreamsAreIndependent) {
  Prng root(7, "root");
  Prng x = root.derive("x"), y = root.derive("y"), x2 = root.derive("x");
  EXPECT_EQ(x.next_u64(), x2.next_u64());
  EXPECT_NE(root.derive("x").next_u64(), y.next_u64());
}

}  // namespace
}  // namespace trident
