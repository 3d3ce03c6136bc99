#pragma once

// The Petersson trace formula at level 1 with trivial character, checked against
// the spectral side built from the Hecke eigenbasis.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "weylcheck/expsums.hpp"
#include "weylcheck/modforms.hpp"
#include "weylcheck/report.hpp"
#include "weylcheck/special.hpp"

namespace weylcheck {

struct PeterssonSide {
  int k = 0;
  std::int64_t m = 0, n = 0;
  int delta_term = 0;
  double kloosterman_sum_value = 0.0;  // 2 pi i^{-k} sum_c S(m,n;c)/c J_{k-1}(4 pi sqrt(mn)/c)
  double tail_bound = 0.0;
  std::int64_t c_max = 0;
  double value() const { return delta_term + kloosterman_sum_value; }
};

namespace detail {

/// Bound on 2 pi sum_{c > C} |S(m,n;c)|/c |J_{k-1}(A/c)| with |S| <= c and
/// |J_nu(z)| <= (z/2)^nu / nu!, A = 4 pi sqrt(mn).
inline double petersson_tail(int k, double A, std::int64_t C) {
  const int nu = k - 1;
  const double log_head = nu * std::log(A / 2.0) - std::lgamma(nu + 1.0);
  // sum_{c > C} c^{-nu} <= C^{1-nu} / (nu - 1)
  return kTwoPi * std::exp(log_head + (1.0 - nu) * std::log(static_cast<double>(C))) / (nu - 1);
}

}  // namespace detail

/// Delta_k(m, n) = delta_{m=n} + 2 pi i^{-k} sum_c S(m,n;c)/c J_{k-1}(4 pi sqrt(mn)/c).
inline PeterssonSide petersson_delta(int k, std::int64_t m, std::int64_t n, double tol = 1e-14) {
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("petersson_delta: k must be even and >= 4");
  if (m < 1 || n < 1 || m * n > 1'000'000) throw std::invalid_argument("petersson_delta: need m, n >= 1, mn <= 1e6");
  if (!(tol > 0)) throw std::invalid_argument("petersson_delta: tol must be positive");
  const double A = 4.0 * kPi * std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  constexpr std::int64_t kCeiling = 1'000'000;
  std::int64_t C = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(A)));
  while (detail::petersson_tail(k, A, C) >= tol) {
    if (C > kCeiling) throw std::runtime_error("petersson_delta: tolerance unreachable with c <= 1e6");
    C = C + C / 8 + 1;
  }
  C = std::min(C, kCeiling);
  CompensatedSum s;
  for (std::int64_t c = 1; c <= C; ++c) {
    const double S = kloosterman(m, n, c).real();
    if (S == 0.0) continue;
    s += S / static_cast<double>(c) * bessel_jn(k - 1, A / static_cast<double>(c));
  }
  const double ik = (k / 2) % 2 == 0 ? 1.0 : -1.0;  // i^{-k}
  PeterssonSide p;
  p.k = k;
  p.m = m;
  p.n = n;
  p.delta_term = m == n ? 1 : 0;
  p.kloosterman_sum_value = kTwoPi * ik * s.value().real();
  p.tail_bound = detail::petersson_tail(k, A, C);
  p.c_max = C;
  return p;
}

struct TraceReport {
  int k = 0;
  int dim = 0;
  int grid = 0;                                  // m, n in 1..grid
  std::vector<std::vector<double>> delta;        // [m-1][n-1]
  double max_abs = 0.0;                          // max |Delta| over the grid
  double symmetry_residual = 0.0;                // max |Delta(m,n) - Delta(n,m)|
  // dimension 1
  double singular_ratio = 0.0;                   // sigma_2 / sigma_1
  double factorization_residual = 0.0;           // max |D(m,n)D(1,1) - D(m,1)D(1,n)| / D(1,1)^2
  std::vector<double> recovered_lambda;          // index 0 unused
  double lambda_error = 0.0;                     // against the Hecke eigenform
  double hecke_residual = 0.0;                   // recovered lambda multiplicativity
  // dimension 2
  std::vector<double> omega_inverse;
  double condition = 0.0;
  double residual = 0.0;                         // max |D - predicted| / max |D|
  bool weights_positive = false;
  Verdict verdict = Verdict::fail;
};

/// Compares Delta_k(m,n) on the grid with sum_f omega_f^{-1} lambda_f(m) lambda_f(n).
inline TraceReport trace_consistency(int k, int grid, double tol) {
  const int dim = cusp_dimension(k);
  if (dim > 2) throw std::invalid_argument("trace_consistency: dim S_k must be at most 2");
  if (grid < 2) throw std::invalid_argument("trace_consistency: grid must be >= 2");
  TraceReport r;
  r.k = k;
  r.dim = dim;
  r.grid = grid;
  r.delta.assign(static_cast<std::size_t>(grid), std::vector<double>(static_cast<std::size_t>(grid), 0.0));
  for (int m = 1; m <= grid; ++m)
    for (int n = 1; n <= grid; ++n) {
      const double v = petersson_delta(k, m, n).value();
      r.delta[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(n - 1)] = v;
      r.max_abs = std::max(r.max_abs, std::abs(v));
    }
  auto D = [&](int m, int n) { return r.delta[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(n - 1)]; };
  for (int m = 1; m <= grid; ++m)
    for (int n = 1; n <= grid; ++n) r.symmetry_residual = std::max(r.symmetry_residual, std::abs(D(m, n) - D(n, m)));

  if (dim == 0) {
    r.verdict = verdict_of(r.max_abs <= tol);
    return r;
  }

  const auto forms = hecke_eigenforms(k, static_cast<std::size_t>(grid * grid + 1));

  if (dim == 1) {
    Eigen::MatrixXd M(grid, grid);
    for (int m = 1; m <= grid; ++m)
      for (int n = 1; n <= grid; ++n) M(m - 1, n - 1) = D(m, n);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    r.singular_ratio = sv(1) / sv(0);
    const double d11 = D(1, 1);
    for (int m = 1; m <= grid; ++m)
      for (int n = 1; n <= grid; ++n)
        r.factorization_residual =
            std::max(r.factorization_residual, std::abs(D(m, n) * d11 - D(m, 1) * D(1, n)) / (d11 * d11));
    r.recovered_lambda.assign(static_cast<std::size_t>(grid) + 1, 0.0);
    for (int m = 1; m <= grid; ++m) {
      r.recovered_lambda[static_cast<std::size_t>(m)] = D(m, 1) / d11;
      r.lambda_error = std::max(
          r.lambda_error, std::abs(r.recovered_lambda[static_cast<std::size_t>(m)] - forms[0].lambda[static_cast<std::size_t>(m)]));
    }
    const auto& L = r.recovered_lambda;
    for (int m = 1; m <= grid; ++m)
      for (int n = 1; n <= grid; ++n) {
        if (m * n > grid) continue;
        double rhs = 0.0;
        for (int d = 1; d <= std::min(m, n); ++d)
          if (m % d == 0 && n % d == 0) rhs += L[static_cast<std::size_t>(m * n / (d * d))];
        r.hecke_residual = std::max(r.hecke_residual, std::abs(L[static_cast<std::size_t>(m)] * L[static_cast<std::size_t>(n)] - rhs));
      }
    r.weights_positive = d11 > 0;
    r.omega_inverse = {d11};
    r.verdict = verdict_of(r.singular_ratio <= tol && r.lambda_error <= tol && r.weights_positive);
    return r;
  }

  // dim 2: omega^{-1} from (1,1) and (2,1), then predict the rest.
  const auto& l1 = forms[0].lambda;
  const auto& l2 = forms[1].lambda;
  Eigen::Matrix2d A;
  A << l1[1] * l1[1], l2[1] * l2[1], l1[2] * l1[1], l2[2] * l2[1];
  const Eigen::Vector2d rhs(D(1, 1), D(2, 1));
  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  r.condition = svd.singularValues()(0) / svd.singularValues()(1);
  if (!(r.condition < 1e12)) throw std::runtime_error("trace_consistency: ill-conditioned weight solve");
  const Eigen::Vector2d w = svd.solve(rhs);
  r.omega_inverse = {w(0), w(1)};
  r.weights_positive = w(0) > 0 && w(1) > 0;
  for (int m = 1; m <= grid; ++m)
    for (int n = 1; n <= grid; ++n) {
      const auto mi = static_cast<std::size_t>(m), ni = static_cast<std::size_t>(n);
      const double pred = w(0) * l1[mi] * l1[ni] + w(1) * l2[mi] * l2[ni];
      r.residual = std::max(r.residual, std::abs(D(m, n) - pred));
    }
  r.residual /= r.max_abs;
  r.verdict = verdict_of(r.residual <= tol && r.weights_positive);
  return r;
}

}  // namespace weylcheck
