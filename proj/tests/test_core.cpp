#include <gtest/gtest.h>

#include <random>

#include "weylcheck/core.hpp"

using namespace weylcheck;

TEST(Core, AdditiveCharacterReducesIntegerPart) {
  EXPECT_NEAR(std::abs(e(0.25) - cplx(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(1e6 + 0.5) - cplx(-1, 0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(e_frac(-1, 4) - cplx(0, -1)), 0.0, 1e-15);
}

TEST(Core, InverseModMatchesSearch) {
  for (std::int64_t m = 1; m <= 60; ++m)
    for (std::int64_t a = -70; a <= 70; ++a) {
      std::optional<std::int64_t> brute;
      for (std::int64_t x = 0; x < m; ++x)
        if (mod(a * x, m) == 1 % m) {
          brute = x;
          break;
        }
      EXPECT_EQ(inverse_mod(a, m), brute) << a << " mod " << m;
    }
  EXPECT_THROW(require_inverse(2, 4, "test"), std::invalid_argument);
}

TEST(Core, FactorizationReassembles) {
  for (std::int64_t n = 1; n <= 5000; ++n) {
    std::int64_t prod = 1;
    for (const auto& pp : factorize(n)) {
      EXPECT_TRUE(is_prime(pp.p));
      prod *= pp.pe;
    }
    EXPECT_EQ(prod, n);
  }
}

TEST(Core, TotientAndDivisorCountMatchBruteForce) {
  const auto table = divisor_count_table(300);
  for (std::int64_t n = 1; n <= 300; ++n) {
    std::int64_t phi = 0, d = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
      if (gcd(k, n) == 1) ++phi;
      if (n % k == 0) ++d;
    }
    EXPECT_EQ(totient(n), phi);
    EXPECT_EQ(divisor_count(n), d);
    EXPECT_EQ(table[static_cast<std::size_t>(n)], d);
  }
}

TEST(Core, PowModAgreesWithRepeatedProduct) {
  for (std::int64_t m = 2; m < 40; ++m)
    for (std::int64_t b = 0; b < m; ++b) {
      std::int64_t r = 1;
      for (std::int64_t k = 0; k < 12; ++k) {
        EXPECT_EQ(pow_mod(b, k, m), r % m);
        r = r * b % m;
      }
    }
}

TEST(Core, CompensatedSumBeatsNaiveAccumulation) {
  CompensatedSum s;
  s += cplx(1e16, 0);
  for (int i = 0; i < 1000; ++i) s += cplx(1.0, -1.0);
  s += cplx(-1e16, 0);
  EXPECT_DOUBLE_EQ(s.value().real(), 1000.0);
  EXPECT_DOUBLE_EQ(s.value().imag(), -1000.0);
}

TEST(Core, RootTableSumsToZero) {
  for (std::int64_t c = 2; c < 100; ++c) {
    RootTable r(c);
    CompensatedSum s;
    for (std::int64_t a = 0; a < c; ++a) s += r(a);
    EXPECT_LT(std::abs(s.value()), 1e-12);
    EXPECT_EQ(r(-1), r(c - 1));
  }
}
