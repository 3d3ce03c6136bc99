#include <gtest/gtest.h>

#include <random>

#include "weylcheck/expsums.hpp"

using namespace weylcheck;

namespace {

const DirichletCharacter& odd_quadratic_or_first_odd(const std::vector<DirichletCharacter>& chars) {
  for (const auto& c : chars)
    if (c.is_odd() && c.is_primitive()) return c;
  throw std::logic_error("no odd primitive character");
}

}  // namespace

TEST(Kloosterman, SmallExamples) {
  EXPECT_NEAR(std::abs(kloosterman(1, 1, 2) - cplx(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(kloosterman(1, 1, 3) - cplx(-1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(kloosterman(0, 1, 4)), 0.0, 1e-12);
  EXPECT_EQ(kloosterman(5, 7, 1), cplx(1, 0));
}

TEST(Kloosterman, RamanujanSpecialization) {
  // S(0, n; c) is the Ramanujan sum c_c(n) = sum_{d | gcd(n,c)} mu(c/d) d.
  auto mobius = [](std::int64_t n) {
    int s = 1;
    for (const auto& pp : factorize(n)) {
      if (pp.e > 1) return 0;
      s = -s;
    }
    return s;
  };
  for (std::int64_t c = 1; c <= 60; ++c)
    for (std::int64_t n = 0; n <= 12; ++n) {
      double expected = 0;
      for (std::int64_t d = 1; d <= c; ++d)
        if (c % d == 0 && n % d == 0) expected += mobius(c / d) * static_cast<double>(d);
      EXPECT_NEAR(std::abs(kloosterman(0, n, c) - expected), 0.0, 1e-9) << c << " " << n;
    }
}

TEST(Kloosterman, WeilBoundExhaustiveSmallPrimes) {
  for (std::int64_t p = 2; p <= 50; ++p) {
    if (!is_prime(p)) continue;
    const RootTable roots(p);
    for (std::int64_t m = 1; m < p; ++m)
      for (std::int64_t n = 1; n < p; ++n)
        EXPECT_LE(std::abs(kloosterman(m, n, p, roots)), 2.0 * std::sqrt(static_cast<double>(p)) + 1e-9);
  }
}

TEST(Kloosterman, WeilBoundSampledLargePrimes) {
  std::mt19937_64 rng(20241);
  for (std::int64_t p = 53; p <= 499; ++p) {
    if (!is_prime(p)) continue;
    const RootTable roots(p);
    std::uniform_int_distribution<std::int64_t> pick(1, p - 1);
    for (int i = 0; i < 20; ++i)
      EXPECT_LE(std::abs(kloosterman(pick(rng), pick(rng), p, roots)), 2.0 * std::sqrt(static_cast<double>(p)) + 1e-9);
  }
}

TEST(Kloosterman, SymmetricAndReal) {
  for (std::int64_t c = 1; c <= 40; ++c)
    for (std::int64_t m = -3; m <= 8; ++m)
      for (std::int64_t n = -3; n <= 8; ++n) {
        const cplx a = kloosterman(m, n, c);
        EXPECT_NEAR(std::abs(a - kloosterman(n, m, c)), 0.0, 1e-12);
        EXPECT_LT(std::abs(a.imag()), 1e-9);
      }
}

TEST(Kloosterman, CrtMultiplicativity) {
  for (std::int64_t c1 = 1; c1 <= 30; ++c1)
    for (std::int64_t c2 = 1; c2 <= 30; ++c2) {
      if (gcd(c1, c2) != 1) continue;
      const std::int64_t c2b = require_inverse(c2, c1, "t"), c1b = require_inverse(c1, c2, "t");
      for (std::int64_t m : {1, 2, 7})
        for (std::int64_t n : {0, 1, 5}) {
          const cplx lhs = kloosterman(m, n, c1 * c2);
          const cplx rhs = kloosterman(m * c2b, n * c2b, c1) * kloosterman(m * c1b, n * c1b, c2);
          EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-9) << c1 << " " << c2;
        }
    }
}

TEST(Kloosterman, FastPathMatchesBruteForce) {
  for (std::int64_t c = 1; c <= 200; ++c)
    for (std::int64_t m : {1, 3, 12})
      for (std::int64_t n : {1, 4, 9}) EXPECT_NEAR(std::abs(kloosterman_crt(m, n, c) - kloosterman(m, n, c)), 0.0, 1e-9);
}

TEST(Kloosterman, ColumnCachesBruteForce) {
  KloostermanColumn col(2, 3);
  for (std::int64_t c = 30; c >= 1; --c) EXPECT_DOUBLE_EQ(col(c), kloosterman(2, 3, c).real());
}

TEST(TwistedKloosterman, PrincipalModOneReducesToPlain) {
  const auto triv = enumerate_characters(1)[0];
  EXPECT_NEAR(std::abs(twisted_kloosterman(triv, 1, 1, 3) - cplx(-1, 0)), 0.0, 1e-12);
  for (std::int64_t c = 1; c <= 20; ++c)
    EXPECT_NEAR(std::abs(twisted_kloosterman(triv, 2, 5, c) - kloosterman(2, 5, c)), 0.0, 1e-12);
}

TEST(TwistedKloosterman, QuadraticModThree) {
  // x = 1 gives e(2/3), x = 2 gives -e(4/3) = -e(1/3); the difference is -i sqrt 3.
  const auto chi = enumerate_characters(3)[1];
  const cplx expected = e(2.0 / 3.0) - e(4.0 / 3.0);
  EXPECT_NEAR(std::abs(expected - cplx(0, -std::sqrt(3.0))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(twisted_kloosterman(chi, 1, 1, 3) - expected), 0.0, 1e-12);
}

TEST(TwistedKloosterman, QuadraticModFiveIsGaussType) {
  const auto chars = enumerate_characters(5);
  for (const auto& chi : chars) {
    if (chi.order() != 2) continue;
    const cplx expected = std::conj(chi(2)) * gauss_sum(chi).g;
    EXPECT_NEAR(std::abs(twisted_kloosterman(chi, 0, 2, 5) - expected), 0.0, 1e-12);
  }
}

TEST(TwistedKloosterman, RejectsModulusMismatch) {
  EXPECT_THROW(twisted_kloosterman(enumerate_characters(5)[1], 1, 1, 6), std::invalid_argument);
}

TEST(TwistedFactorization, SmallCasesSplitAsExpected) {
  const auto chi3 = odd_quadratic_or_first_odd(enumerate_characters(3));
  const auto r = verify_twisted_factorization(chi3, 1, 1, 0, 2);
  EXPECT_LT(r.lhs_vs_middle, 1e-9);
  EXPECT_LT(r.lhs_vs_corrected, 1e-9);
  EXPECT_NEAR(std::abs(r.lhs + r.stated), 0.0, 1e-9);

  const auto r1 = verify_twisted_factorization(chi3, 1, 2, 1, 1);
  EXPECT_LT(r1.lhs_vs_corrected, 1e-9);
}

TEST(TwistedFactorization, CorrectedVariantHoldsForAllOddPrimitive) {
  for (std::int64_t q : {3, 5, 7}) {
    for (const auto& chi : enumerate_characters(q)) {
      if (!chi.is_odd() || !chi.is_primitive()) continue;
      for (std::int64_t c = 1; c <= 8; ++c) {
        if (gcd(c, q) != 1) continue;
        for (int nu : {0, 1})
          for (std::int64_t n : {1, 2})
            for (std::int64_t mp = 1; mp < q; ++mp) {
              const auto r = verify_twisted_factorization(chi, n, mp, nu, c);
              EXPECT_LT(r.lhs_vs_middle, 1e-9);
              EXPECT_LT(r.lhs_vs_corrected, 1e-9);
            }
      }
    }
  }
}

TEST(TwistedFactorization, RejectsBadInputs) {
  const auto chars = enumerate_characters(5);
  EXPECT_THROW(verify_twisted_factorization(chars[0], 1, 1, 0, 2), std::invalid_argument);
  const auto& odd = odd_quadratic_or_first_odd(chars);
  EXPECT_THROW(verify_twisted_factorization(odd, 1, 1, 0, 5), std::invalid_argument);
  EXPECT_THROW(verify_twisted_factorization(odd, 1, 5, 0, 2), std::invalid_argument);
}

TEST(CharsumGrid, Examples) {
  auto r = charsum_grid(1, 2, 5);
  EXPECT_NEAR(std::abs(r.value - 5.0 * e(-3.0 / 5.0)), 0.0, 1e-9);
  for (std::int64_t c = 1; c <= 20; ++c) EXPECT_NEAR(std::abs(charsum_grid(0, 1, c).value - double(c)), 0.0, 1e-9);
  r = charsum_grid(7, 3, 8);
  EXPECT_NEAR(std::abs(r.value - 8.0 * e(-21.0 / 8.0)), 0.0, 1e-9);
}

TEST(CharsumGrid, ClosedFormSweep) {
  for (std::int64_t c = 1; c <= 24; ++c)
    for (std::int64_t n = 1; n <= c; ++n) {
      if (gcd(n, c) != 1) continue;
      for (std::int64_t m = 0; m < c; ++m) {
        const auto r = charsum_grid(m, n, c);
        ASSERT_TRUE(r.deviation.has_value());
        EXPECT_LT(*r.deviation, 1e-9);
      }
    }
}

TEST(CharsumGrid, NonUnitMarksClosedFormInapplicable) {
  const auto r = charsum_grid(1, 2, 4);
  EXPECT_FALSE(r.closed_form.has_value());
  EXPECT_FALSE(r.deviation.has_value());
}

TEST(CharsumCongruence, Examples) {
  EXPECT_NEAR(std::abs(charsum_congruence(2, 1, 1, 3, 5).value - 15.0), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(charsum_congruence(1, 1, 1, 3, 5).value), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(charsum_congruence(mod(-4, 35), 2, 3, 5, 7).value - 35.0), 0.0, 1e-9);
}

TEST(CharsumCongruence, IndicatorSweep) {
  for (std::int64_t c1 = 1; c1 <= 8; ++c1)
    for (std::int64_t c2 = 1; c2 <= 8; ++c2) {
      if (gcd(c1, c2) != 1) continue;
      for (std::int64_t n1 = 1; n1 <= c1; ++n1)
        for (std::int64_t n2 = 1; n2 <= c2; ++n2) {
          if (gcd(n1, c1) != 1 || gcd(n2, c2) != 1) continue;
          for (std::int64_t m = 0; m < c1 * c2; ++m) EXPECT_LT(charsum_congruence(m, n1, n2, c1, c2).deviation, 1e-9);
        }
    }
}

TEST(CharsumCongruence, RejectsNonUnits) { EXPECT_THROW(charsum_congruence(0, 2, 1, 4, 3), std::invalid_argument); }
