#include <gtest/gtest.h>

#include <cmath>

#include "lncd/gf.hpp"
#include "lncd/model.hpp"

using namespace lncd;
using namespace lncd::gf;

namespace {

// Carry-less product then long division by the modulus, written separately
// from the library code.
std::uint32_t oracle_mul(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned q) {
  std::uint32_t prod = 0;
  for (unsigned i = 0; i < q; ++i)
    if (b & (1u << i)) prod ^= a << i;
  for (int bit = 2 * q - 2; bit >= static_cast<int>(q); --bit)
    if (prod & (1u << bit)) prod ^= poly << (bit - q);
  return prod;
}

CoefficientVector unit(std::size_t n, std::size_t i, Element c = 1) {
  CoefficientVector v(n, 0);
  v[i] = c;
  return v;
}

}  // namespace

TEST(Field, AesPolynomialExample) {
  const FieldContext f(8, 0x11B);
  EXPECT_EQ(oracle_mul(0x53, 0xCA, 0x11B, 8), 0x01u);
  EXPECT_EQ(f.mul(0x53, 0xCA), 0x01);
  EXPECT_EQ(f.inv(0x53), 0xCA);
}

TEST(Field, DefaultDegreeEightIsAesPolynomial) {
  EXPECT_EQ(default_polynomial(8), 0x11Bu);
}

TEST(Field, TablesMatchOracleEverywhereForSmallFields) {
  for (unsigned q = 1; q <= 8; ++q) {
    const FieldContext f(q);
    for (std::uint32_t a = 0; a < f.order(); ++a)
      for (std::uint32_t b = 0; b < f.order(); ++b)
        ASSERT_EQ(f.mul(a, b), oracle_mul(a, b, f.polynomial(), q)) << q << " " << a << " " << b;
  }
}

TEST(Field, SampledProductsMatchOracleForLargeFields) {
  auto rng = derive_stream(5, 0, StreamKind::Coefficient, 1);
  for (unsigned q = 9; q <= 16; ++q) {
    const FieldContext f(q);
    for (int i = 0; i < 20'000; ++i) {
      const auto a = static_cast<Element>(rng.bits(q));
      const auto b = static_cast<Element>(rng.bits(q));
      ASSERT_EQ(f.mul(a, b), oracle_mul(a, b, f.polynomial(), q));
      ASSERT_EQ(f.mul(a, b), mul_shift_reduce(a, b, f.polynomial(), q));
    }
  }
}

TEST(Field, IdentityAnnihilatorInverse) {
  for (unsigned q : {1u, 4u, 8u, 12u, 16u}) {
    const FieldContext f(q);
    for (std::uint32_t a = 0; a < std::min<std::uint32_t>(f.order(), 5000); ++a) {
      EXPECT_EQ(f.mul(a, 1), a);
      EXPECT_EQ(f.mul(a, 0), 0);
      if (a != 0) EXPECT_EQ(f.mul(a, f.inv(a)), 1);
    }
    EXPECT_EQ(f.inv(1), 1);
  }
}

TEST(Field, ZeroHasNoInverse) {
  const FieldContext f(8);
  try {
    f.inv(0);
    FAIL() << "expected ZeroInverse";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroInverse);
  }
}

TEST(Field, RejectsReduciblePolynomial) {
  EXPECT_FALSE(is_irreducible(0x100));  // x^8
  EXPECT_FALSE(is_irreducible(0x105));  // x^8 + x^2 + 1 = (x^4 + x + 1)^2
  EXPECT_THROW(FieldContext(8, 0x105), Error);
  EXPECT_THROW(FieldContext(8, 0x1B), Error);
  EXPECT_THROW(FieldContext(17), Error);
}

TEST(Field, IrreducibleButNotPrimitiveStillWorks) {
  // x^8+x^4+x^3+x+1 is irreducible but x has order 51; tables need another generator.
  const FieldContext f(8, 0x11B);
  for (std::uint32_t a = 1; a < 256; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1);
}

TEST(RankTracker, FirstUnitVectorIsInnovative) {
  const FieldContext f(8);
  RankTracker t(4);
  EXPECT_TRUE(t.insert(f, unit(4, 0)));
  EXPECT_EQ(t.rank(), 1u);
}

TEST(RankTracker, ScalarMultipleIsNot) {
  const FieldContext f(8);
  RankTracker t(4);
  t.insert(f, unit(4, 0));
  for (Element c = 1; c < 256; ++c) EXPECT_FALSE(t.insert(f, unit(4, 0, c)));
  EXPECT_EQ(t.rank(), 1u);
}

TEST(RankTracker, TriangularSetReachesFullRank) {
  const FieldContext f(8);
  auto rng = derive_stream(9, 0, StreamKind::Coefficient, 1);
  constexpr std::size_t n = 10;
  RankTracker t(n);
  // Upper triangular with nonzero diagonal, inserted bottom row first.
  std::vector<CoefficientVector> rows(n, CoefficientVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    rows[i][i] = static_cast<Element>(1 + rng.bits(8) % 255);
    for (std::size_t j = i + 1; j < n; ++j) rows[i][j] = static_cast<Element>(rng.bits(8));
  }
  for (std::size_t i = n; i-- > 0;) EXPECT_TRUE(t.insert(f, rows[i]));
  EXPECT_EQ(t.rank(), n);
  EXPECT_TRUE(t.complete());
  CoefficientVector any(n);
  for (auto& x : any) x = static_cast<Element>(rng.bits(8));
  EXPECT_FALSE(t.insert(f, any));
}

TEST(RankTracker, DimensionMismatch) {
  const FieldContext f(8);
  RankTracker t(3);
  try {
    t.insert(f, unit(4, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Combination, SingleGeneratorScales) {
  const FieldContext f(8);
  const std::vector<CoefficientVector> stored{unit(3, 0)};
  auto rng = derive_stream(1, 0, StreamKind::Coefficient, 1);
  for (int i = 0; i < 100; ++i) {
    const auto v = random_combination(f, stored, rng);
    EXPECT_EQ(v[1], 0);
    EXPECT_EQ(v[2], 0);
  }
}

TEST(Combination, EmptyStorageThrows) {
  const FieldContext f(8);
  auto rng = derive_stream(1, 0, StreamKind::Coefficient, 1);
  try {
    random_combination(f, {}, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyStorage);
  }
}

TEST(Combination, NeverLeavesTheSpan) {
  const FieldContext f(8);
  auto rng = derive_stream(2, 0, StreamKind::Coefficient, 1);
  RankTracker span(6);
  for (std::size_t i = 0; i < 3; ++i) {
    CoefficientVector v(6);
    for (auto& x : v) x = static_cast<Element>(rng.bits(8));
    span.insert(f, v);
  }
  for (int i = 0; i < 1000; ++i) {
    RankTracker copy = span;
    copy.insert(f, random_combination(f, span.basis(), rng));
    ASSERT_EQ(copy.rank(), span.rank());
  }
}

TEST(Combination, ZeroSecondCoefficientRate) {
  const FieldContext f(8);
  RankTracker first(2);
  first.insert(f, unit(2, 0));
  const std::vector<CoefficientVector> stored{unit(2, 0), unit(2, 1)};
  auto rng = derive_stream(3, 0, StreamKind::Coefficient, 1);
  constexpr int kDraws = 100'000;
  int inside = 0;
  for (int i = 0; i < kDraws; ++i) inside += first.contains(f, random_combination(f, stored, rng));
  const double p = 1.0 / 256, se = std::sqrt(p * (1 - p) / kDraws);
  EXPECT_NEAR(inside / double(kDraws), p, 5 * se);
}

TEST(Field, DefaultPolynomialsIrreducible) {
  for (unsigned q = 1; q <= 16; ++q) {
    EXPECT_TRUE(is_irreducible(default_polynomial(q))) << q;
    EXPECT_EQ(static_cast<unsigned>(31 - __builtin_clz(default_polynomial(q))), q);
  }
}
