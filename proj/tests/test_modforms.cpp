#include <gtest/gtest.h>

#include "weylcheck/modforms.hpp"

using namespace weylcheck;

namespace {

// Dense product prod_{n>=1} (1 - q^n)^{24}, shifted by q: an expansion of the
// discriminant independent of the sparse triple-product route.
std::vector<mpz_class> naive_delta(std::size_t prec) {
  std::vector<mpz_class> p(prec + 1, 0);
  p[0] = 1;
  for (std::size_t n = 1; n <= prec; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (std::size_t i = prec; i >= n; --i) p[i] -= p[i - n];
  std::vector<mpz_class> out(prec + 1, 0);
  for (std::size_t i = 1; i <= prec; ++i) out[i] = p[i - 1];
  return out;
}

std::vector<mpz_class> naive_eisenstein(int power, long scale, std::size_t prec) {
  std::vector<mpz_class> out(prec + 1, 0);
  out[0] = 1;
  for (std::size_t n = 1; n <= prec; ++n) {
    mpz_class s = 0;
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) {
        mpz_class dp;
        mpz_ui_pow_ui(dp.get_mpz_t(), d, static_cast<unsigned long>(power));
        s += dp;
      }
    out[n] = s * scale;
  }
  return out;
}

std::vector<mpz_class> naive_product(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  std::vector<mpz_class> out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// dim M_k = #{(a, b) >= 0 : 4a + 6b = k}; the cusp space drops the Eisenstein line.
int classical_cusp_dimension(int k) {
  int count = 0;
  for (int b = 0; 6 * b <= k; ++b)
    if ((k - 6 * b) % 4 == 0) ++count;
  return count - 1;
}

}  // namespace

TEST(VictorMiller, EmptyAtWeightTen) { EXPECT_TRUE(victor_miller_basis(10, 20).empty()); }

TEST(VictorMiller, DeltaCoefficients) {
  const auto basis = victor_miller_basis(12, 60);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0][1], 1);
  EXPECT_EQ(basis[0][2], -24);
  EXPECT_EQ(basis[0][3], 252);
  EXPECT_EQ(basis[0][4], -1472);
  EXPECT_EQ(basis[0].coeffs, naive_delta(60));
}

TEST(VictorMiller, SparseDeltaMatchesDenseProductFar) { EXPECT_EQ(delta_expansion(400).coeffs, naive_delta(400)); }

TEST(VictorMiller, WeightSixteenIsE4TimesDelta) {
  const auto basis = victor_miller_basis(16, 40);
  ASSERT_EQ(basis.size(), 1u);
  const auto expected = naive_product(naive_eisenstein(3, 240, 40), naive_delta(40));
  EXPECT_EQ(basis[0].coeffs, expected);
  EXPECT_EQ(basis[0][2], 216);
}

TEST(VictorMiller, WeightTwentyFourIsEchelon) {
  const auto basis = victor_miller_basis(24, 30);
  ASSERT_EQ(basis.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(basis[i][0], 0);
    for (std::size_t j = 1; j <= 2; ++j) EXPECT_EQ(basis[i][j], (i + 1 == j) ? 1 : 0);
  }
}

TEST(VictorMiller, DimensionFormula) {
  for (int k = 4; k <= 40; k += 2) {
    EXPECT_EQ(cusp_dimension(k), classical_cusp_dimension(k)) << k;
    const auto basis = victor_miller_basis(k, static_cast<std::size_t>(cusp_dimension(k)) + 4);
    EXPECT_EQ(static_cast<int>(basis.size()), classical_cusp_dimension(k));
  }
}

TEST(VictorMiller, RejectsBadWeights) {
  EXPECT_THROW(victor_miller_basis(13, 20), std::invalid_argument);
  EXPECT_THROW(victor_miller_basis(2, 20), std::invalid_argument);
  EXPECT_THROW(victor_miller_basis(36, 3), std::invalid_argument);
}

TEST(Hecke, OperatorsCompose) {
  for (int k : {24, 36, 40}) {
    const std::size_t d = static_cast<std::size_t>(cusp_dimension(k));
    const auto basis = victor_miller_basis(k, 100 * d);
    for (std::size_t m = 2; m <= 10; ++m)
      for (std::size_t n = 2; n <= 10; ++n) {
        if (gcd(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)) != 1) continue;
        const auto Mm = hecke_matrix(basis, m), Mn = hecke_matrix(basis, n), Mmn = hecke_matrix(basis, m * n);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t l = 0; l < d; ++l) {
            mpz_class s = 0;
            for (std::size_t j = 0; j < d; ++j) s += Mn[i][j] * Mm[j][l];
            EXPECT_EQ(s, Mmn[i][l]) << k << " " << m << " " << n;
          }
      }
  }
}

TEST(Hecke, InsufficientPrecisionFailsLoudly) {
  const auto basis = victor_miller_basis(24, 10);
  EXPECT_THROW(hecke_matrix(basis, 7), std::out_of_range);
}

TEST(Eigenforms, DeltaLambdaTwo) {
  const auto forms = hecke_eigenforms(12, 50);
  ASSERT_EQ(forms.size(), 1u);
  EXPECT_NEAR(forms[0].lambda[2], -24.0 / std::pow(2.0, 5.5), 1e-14);
  EXPECT_NEAR(forms[0].lambda[2], -0.530330086, 1e-9);
  const auto direct = delta_eigenform(50);
  for (std::size_t n = 1; n <= 50; ++n) EXPECT_DOUBLE_EQ(direct.lambda[n], forms[0].lambda[n]);
}

TEST(Eigenforms, WeightSixteen) {
  const auto forms = hecke_eigenforms(16, 30);
  ASSERT_EQ(forms.size(), 1u);
  EXPECT_EQ(cmp(forms[0].arithmetic[2], 216), 0);
}

TEST(Eigenforms, WeightTwentyFourEigenvaluesAreQuadraticConjugates) {
  const auto forms = hecke_eigenforms(24, 60);
  ASSERT_EQ(forms.size(), 2u);
  // T_2 eigenvalues are 540 -+ 12 sqrt(144169), checked to 40 digits
  mpf_class root(144169, kEigenBits);
  mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
  const mpf_class lo(540 - 12 * root, kEigenBits), hi(540 + 12 * root, kEigenBits);
  mpf_class e0(forms[0].t2_eigenvalue - lo, kEigenBits), e1(forms[1].t2_eigenvalue - hi, kEigenBits);
  EXPECT_LT(abs(e0), mpf_class(1e-40));
  EXPECT_LT(abs(e1), mpf_class(1e-40));
  const std::string text = forms[0].eigenvalue_string(35);
  EXPECT_EQ(text.front(), '-');
  EXPECT_GE(text.find('e'), 31u);
}

TEST(Eigenforms, MultiplicativeHeckeAndDeligne) {
  for (int k : {12, 16, 18, 20, 22, 24, 26, 28, 30, 36}) {
    const auto forms = hecke_eigenforms(k, 200);
    EXPECT_EQ(static_cast<int>(forms.size()), cusp_dimension(k));
    for (const auto& f : forms) {
      const auto& l = f.lambda;
      EXPECT_EQ(l[1], 1.0);
      for (std::size_t m = 1; m <= 14; ++m)
        for (std::size_t n = 1; n <= 14; ++n) {
          if (gcd(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)) != 1) continue;
          EXPECT_NEAR(l[m * n], l[m] * l[n], 1e-10 * std::max(1.0, std::abs(l[m * n]))) << k;
        }
      for (std::size_t p : {2, 3, 5, 7}) {
        std::size_t pj = p, prev = 1;
        while (pj * p <= 200) {
          EXPECT_NEAR(l[p] * l[pj], l[pj * p] + l[prev], 1e-10 * std::max(1.0, std::abs(l[p] * l[pj]))) << k;
          prev = pj;
          pj *= p;
        }
      }
      const auto dtab = divisor_count_table(200);
      for (std::size_t n = 1; n <= 200; ++n) EXPECT_LE(std::abs(l[n]), static_cast<double>(dtab[n]) * (1 + 1e-12));
    }
  }
}

TEST(Eigenforms, IndependentOfPrecision) {
  const auto a = hecke_eigenforms(24, 30), b = hecke_eigenforms(24, 120);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t n = 1; n <= 30; ++n) EXPECT_NEAR(a[i].lambda[n], b[i].lambda[n], 1e-9);
}

TEST(Eigenforms, EmptySpaceRejected) { EXPECT_THROW(hecke_eigenforms(10, 20), std::invalid_argument); }

TEST(CoefficientBounds, DeltaToOneThousand) {
  const auto r = coefficient_bound_report(delta_eigenform(1000), 1000);
  EXPECT_TRUE(r.deligne_ok);
  EXPECT_LE(r.max_deligne_ratio, 1.0 + 1e-10);
  EXPECT_GE(r.rs_min, 0.1);
  EXPECT_LE(r.rs_max, 10.0);
  EXPECT_EQ(r.rankin_selberg.back().first, 1000u);
}

TEST(CoefficientBounds, TrivialRange) {
  const auto r = coefficient_bound_report(delta_eigenform(10), 1);
  EXPECT_DOUBLE_EQ(r.max_deligne_ratio, 1.0);
  EXPECT_EQ(r.argmax, 1u);
}

TEST(CoefficientBounds, WeightSixteen) {
  const auto r = coefficient_bound_report(hecke_eigenforms(16, 500)[0], 500);
  EXPECT_TRUE(r.deligne_ok);
  EXPECT_TRUE(r.rs_ok);
}

TEST(CoefficientBounds, RejectsTooLargeX) { EXPECT_THROW(coefficient_bound_report(delta_eigenform(10), 11), std::out_of_range); }
