#include <gtest/gtest.h>

#include <set>

#include "weylcheck/characters.hpp"

using namespace weylcheck;

namespace {

const DirichletCharacter& with_order(const std::vector<DirichletCharacter>& chars, std::int64_t order) {
  for (const auto& c : chars)
    if (c.order() == order) return c;
  throw std::logic_error("no character of requested order");
}

// Number of primitive characters mod q, from the prime-power counts
// p - 2 (e = 1) and p^e - 2 p^{e-1} + p^{e-2} (e >= 2).
std::int64_t primitive_count(std::int64_t q) {
  std::int64_t out = 1;
  for (const auto& pp : factorize(q)) {
    if (pp.e == 1)
      out *= pp.p - 2;
    else
      out *= pp.pe - 2 * (pp.pe / pp.p) + pp.pe / (pp.p * pp.p);
  }
  return out;
}

}  // namespace

TEST(Characters, ModThreeHasPrincipalAndOddQuadratic) {
  const auto chars = enumerate_characters(3);
  ASSERT_EQ(chars.size(), 2u);
  EXPECT_TRUE(chars[0].is_principal());
  EXPECT_TRUE(chars[0].is_even());
  EXPECT_TRUE(chars[1].is_odd());
  EXPECT_NEAR(std::abs(chars[1](2) - cplx(-1, 0)), 0.0, 1e-15);
}

TEST(Characters, ModOneIsTrivial) {
  const auto chars = enumerate_characters(1);
  ASSERT_EQ(chars.size(), 1u);
  EXPECT_EQ(chars[0](0), cplx(1, 0));
  EXPECT_EQ(chars[0](17), cplx(1, 0));
  EXPECT_TRUE(chars[0].is_primitive());
}

TEST(Characters, ModEightSplitsTwoAndTwo) {
  const auto chars = enumerate_characters(8);
  ASSERT_EQ(chars.size(), 4u);
  int odd = 0;
  for (const auto& c : chars) odd += c.is_odd();
  EXPECT_EQ(odd, 2);
}

TEST(Characters, GroupInvariantsHoldUpToSixty) {
  for (std::int64_t q = 1; q <= 60; ++q) {
    const auto chars = enumerate_characters(q);
    const std::int64_t phi = totient(q);
    ASSERT_EQ(static_cast<std::int64_t>(chars.size()), phi) << q;
    int principal = 0, odd = 0, primitive = 0;
    std::set<std::vector<std::int64_t>> distinct;
    for (const auto& chi : chars) {
      principal += chi.is_principal();
      odd += chi.is_odd();
      primitive += chi.is_primitive();
      EXPECT_EQ(phi % chi.order(), 0);
      std::vector<std::int64_t> table;
      for (std::int64_t a = 0; a < q; ++a) {
        table.push_back(chi.exponent(a));
        EXPECT_EQ(chi.exponent(a) < 0, gcd(a, q) > 1);
        for (std::int64_t b = 0; b < q; ++b) {
          const auto ab = chi.exponent(a * b);
          if (chi.exponent(a) < 0 || chi.exponent(b) < 0) {
            EXPECT_LT(ab, 0);
          } else {
            EXPECT_EQ(ab, mod(chi.exponent(a) + chi.exponent(b), chi.order()));
          }
        }
      }
      const cplx minus_one = chi(q - 1);
      if (q > 2) {
        EXPECT_NEAR(std::abs(minus_one - (chi.is_odd() ? cplx(-1, 0) : cplx(1, 0))), 0.0, 1e-12);
      }
      distinct.insert(table);
    }
    EXPECT_EQ(principal, 1);
    EXPECT_EQ(static_cast<std::int64_t>(distinct.size()), phi);
    if (odd > 0) {
      EXPECT_EQ(odd, phi / 2);
    }
    EXPECT_EQ(primitive, primitive_count(q)) << q;
  }
}

TEST(Characters, OrthogonalityUpToFifty) {
  for (std::int64_t q = 1; q <= 50; ++q) {
    const auto chars = enumerate_characters(q);
    for (std::int64_t a = 0; a < q; ++a) {
      if (gcd(a, q) != 1) continue;
      CompensatedSum s;
      for (const auto& chi : chars) s += chi(a);
      const double expected = mod(a, q) == 1 % q ? static_cast<double>(totient(q)) : 0.0;
      EXPECT_NEAR(std::abs(s.value() - expected), 0.0, 1e-12) << q << " " << a;
    }
  }
}

TEST(Characters, ProductIsPointwise) {
  const auto chars = enumerate_characters(36);
  for (const auto& a : chars)
    for (const auto& b : chars) {
      const auto ab = a * b;
      for (std::int64_t n = 0; n < 36; ++n) EXPECT_NEAR(std::abs(ab(n) - a(n) * b(n)), 0.0, 1e-12);
    }
}

TEST(GaussSum, QuadraticModFiveIsRootFive) {
  const auto g = gauss_sum(with_order(enumerate_characters(5), 2));
  EXPECT_NEAR(std::abs(g.g - cplx(std::sqrt(5.0), 0)), 0.0, 1e-12);
}

TEST(GaussSum, QuadraticModThreeIsIRootThree) {
  const auto g = gauss_sum(enumerate_characters(3)[1]);
  EXPECT_NEAR(std::abs(g.g - cplx(0, std::sqrt(3.0))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g.epsilon - cplx(0, 1)), 0.0, 1e-12);
}

TEST(GaussSum, PrincipalModPrimeIsMinusOne) {
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 97}) {
    const auto g = gauss_sum(enumerate_characters(p)[0]);
    EXPECT_NEAR(std::abs(g.g - cplx(-1, 0)), 0.0, 1e-12) << p;
  }
}

TEST(GaussSum, PrimitiveModulusIsRootQ) {
  for (std::int64_t q = 1; q <= 100; ++q)
    for (const auto& chi : enumerate_characters(q)) {
      const auto g = gauss_sum(chi);
      if (!chi.is_primitive()) {
        EXPECT_FALSE(g.modulus_deviation.has_value());
        continue;
      }
      ASSERT_TRUE(g.modulus_deviation.has_value());
      EXPECT_LT(*g.modulus_deviation, 1e-9) << q;
      EXPECT_NEAR(std::abs(g.epsilon), 1.0, 1e-9);
    }
}

TEST(OddAverage, ModThreeExamples) {
  EXPECT_NEAR(std::abs(odd_character_average(3, 1, 1, 1) - cplx(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(odd_character_average(3, 1, 1, 2) - cplx(0, 1)), 0.0, 1e-12);
}

TEST(OddAverage, ModFiveMatchesAnAntisymmetricCandidate) {
  const cplx v = odd_character_average(5, 2, 1, 3);
  double best = 1e9;
  for (int u : {1, -1})
    for (bool inv : {false, true}) best = std::min(best, std::abs(v - average_candidate_value(5, 2, 1, u, inv)));
  EXPECT_LT(best, 1e-12);
}

TEST(OddAverage, RejectsNonUnits) {
  EXPECT_THROW(odd_character_average(9, 3, 1, 1), std::invalid_argument);
  EXPECT_THROW(odd_character_average(5, 1, 5, 1), std::invalid_argument);
  EXPECT_THROW(odd_character_average(5, 1, 1, 10), std::invalid_argument);
}

TEST(OddAverage, ConventionIsPlainProductWithPositiveSign) {
  for (std::int64_t q : {3, 5, 7, 11, 13}) {
    const auto conv = discover_average_convention(q);
    ASSERT_TRUE(conv.matched.has_value()) << q;
    const auto& cand = conv.candidates[*conv.matched];
    EXPECT_EQ(cand.sign, 1);
    EXPECT_FALSE(cand.inverse);
    EXPECT_LT(conv.m_prime_spread, 1e-12);
  }
}
