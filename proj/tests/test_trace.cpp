#include <gtest/gtest.h>

#include "mp_oracle.hpp"
#include "weylcheck/trace.hpp"

using namespace weylcheck;

TEST(Petersson, EmptySpaceCancels) {
  const auto p = petersson_delta(10, 1, 1);
  EXPECT_EQ(p.delta_term, 1);
  EXPECT_NEAR(p.value(), 0.0, 1e-8);
  EXPECT_LT(p.tail_bound, 1e-12);
  EXPECT_GT(p.c_max, 0);
}

TEST(Petersson, EmptySpaceCancelsOnGrid) {
  for (int k : {8, 10, 14})
    for (int m = 1; m <= 5; ++m)
      for (int n = 1; n <= 5; ++n) EXPECT_NEAR(petersson_delta(k, m, n).value(), 0.0, 1e-8) << k << " " << m << " " << n;
}

TEST(Petersson, WeightTwelveDiagonalIsPositive) {
  EXPECT_GT(petersson_delta(12, 1, 1).value(), 0.0);
}

// Independent c-sum: Kloosterman by CRT factors, Bessel from MPFR, same truncation.
TEST(Petersson, CSumMatchesIndependentEvaluation) {
  for (auto [k, m, n] : {std::tuple{12, 2, 3}, {16, 1, 4}, {10, 3, 5}}) {
    const auto p = petersson_delta(k, m, n);
    const double A = 4 * kPi * std::sqrt(static_cast<double>(m * n));
    double s = 0;
    for (std::int64_t c = 1; c <= p.c_max; ++c)
      s += kloosterman_crt(m, n, c).real() / c * oracle::bessel_j(k - 1, A / c);
    const double ik = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    EXPECT_NEAR(p.kloosterman_sum_value, kTwoPi * ik * s, 1e-12);
  }
}

TEST(Petersson, Symmetric) {
  for (int k : {12, 24})
    for (int m = 1; m <= 6; ++m)
      for (int n = m + 1; n <= 6; ++n)
        EXPECT_NEAR(petersson_delta(k, m, n).value(), petersson_delta(k, n, m).value(), 1e-10);
}

TEST(Petersson, DoublingCutoffStaysWithinTailBound) {
  const auto coarse = petersson_delta(12, 3, 7, 1e-6);
  const auto fine = petersson_delta(12, 3, 7, 1e-14);
  EXPECT_GT(fine.c_max, coarse.c_max);
  EXPECT_LE(std::abs(coarse.value() - fine.value()), coarse.tail_bound + 1e-13);
}

TEST(Petersson, DimensionOneFactorization) {
  const double d23 = petersson_delta(12, 2, 3).value(), d11 = petersson_delta(12, 1, 1).value();
  const double d21 = petersson_delta(12, 2, 1).value(), d13 = petersson_delta(12, 1, 3).value();
  EXPECT_NEAR(d23 * d11, d21 * d13, 1e-8 * std::abs(d21 * d13));
}

TEST(Petersson, RejectsBadArguments) {
  EXPECT_THROW(petersson_delta(11, 1, 1), std::invalid_argument);
  EXPECT_THROW(petersson_delta(2, 1, 1), std::invalid_argument);
  EXPECT_THROW(petersson_delta(12, 0, 1), std::invalid_argument);
  EXPECT_THROW(petersson_delta(12, 1001, 1000), std::invalid_argument);
}

TEST(TraceConsistency, EmptySpace) {
  const auto r = trace_consistency(10, 5, 1e-8);
  EXPECT_EQ(r.dim, 0);
  EXPECT_LE(r.max_abs, 1e-8);
  EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(TraceConsistency, WeightTwelveRecoversTau) {
  const auto r = trace_consistency(12, 8, 1e-7);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_NEAR(r.recovered_lambda[2], -24.0 / std::pow(2.0, 5.5), 1e-7);
  EXPECT_NEAR(r.recovered_lambda[3], 252.0 / std::pow(3.0, 5.5), 1e-7);
  EXPECT_LE(r.lambda_error, 1e-7);
  EXPECT_LE(r.singular_ratio, 1e-6);
}

TEST(TraceConsistency, DimensionOneWeightsAreRankOne) {
  for (int k : {12, 16, 18, 20, 22, 26}) {
    const auto r = trace_consistency(k, 8, 1e-6);
    EXPECT_EQ(r.dim, 1);
    EXPECT_LE(r.singular_ratio, 1e-6) << k;
    EXPECT_LE(r.factorization_residual, 1e-8) << k;
    EXPECT_LE(r.hecke_residual, 1e-6) << k;
    for (std::size_t p : {2u, 3u, 5u, 7u}) EXPECT_LE(std::abs(r.recovered_lambda[p]), 2.0) << k;
    EXPECT_TRUE(r.weights_positive);
    EXPECT_LE(r.symmetry_residual, 1e-10);
  }
}

TEST(TraceConsistency, DimensionTwoPredictsGrid) {
  const auto r = trace_consistency(24, 6, 1e-6);
  EXPECT_EQ(r.dim, 2);
  EXPECT_LE(r.residual, 1e-6);
  EXPECT_TRUE(r.weights_positive);
  EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(TraceConsistency, RejectsLargeDimension) {
  EXPECT_THROW(trace_consistency(36, 4, 1e-6), std::invalid_argument);
}
