#pragma once

// Integer-order Bessel J, Stirling log-Gamma with an explicit remainder
// bound, the Gamma-ratio phase, and the k-sum kernel C_a.

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "weylcheck/core.hpp"

namespace weylcheck {

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Power series; returns the value and a relative error estimate.
inline std::pair<double, double> bessel_series(int n, double x) {
  const double half = 0.5 * x;
  const double log_pref = n * std::log(half) - std::lgamma(n + 1.0);
  if (log_pref < -745.0) return {0.0, 0.0};
  double pref = 1.0, rel = 16.0;
  if (n <= 500 && log_pref > -700.0) {
    for (int j = 1; j <= n; ++j) pref *= half / j;
    rel += 2.0 * n;
  } else {
    pref = std::exp(log_pref);
    rel += 4.0 * std::abs(log_pref) + 2.0 * n;
  }
  const double q = -half * half;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<double>(m) * (m + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return {pref * sum, rel * kEps};
}

/// Hankel expansion; cos(x - phi) is expanded so that x itself is reduced
/// by the library's exact argument reduction.
inline double bessel_hankel(int n, double x) {
  const double mu = 4.0 * n * static_cast<double>(n);
  double P = 0.0, Q = 0.0;
  double term = 1.0;  // a_k / x^k with sign pattern folded in below
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 400; ++k) {
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series: stop at the smallest term
    last = mag;
    switch (k % 4) {
      case 0: P += term; break;
      case 1: Q += term; break;
      case 2: P -= term; break;
      case 3: Q -= term; break;
    }
    if (mag < 1e-17 * std::max(std::abs(P), 1e-300)) break;
    const double odd = 2.0 * k + 1.0;
    term *= (mu - odd * odd) / ((k + 1.0) * 8.0 * x);
  }
  const double phase_units[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // (cos, sin) of n pi / 2
  const auto& u = phase_units[n % 4];
  const double cq = std::sqrt(0.5), sq = std::sqrt(0.5);
  const double cphi = u[0] * cq - u[1] * sq;  // phi = n pi/2 + pi/4
  const double sphi = u[1] * cq + u[0] * sq;
  const double cx = std::cos(x), sx = std::sin(x);
  const double cchi = cx * cphi + sx * sphi;
  const double schi = sx * cphi - cx * sphi;
  return std::sqrt(2.0 / (kPi * x)) * (P * cchi - Q * schi);
}

inline int miller_start(int n, double x) {
  const double top = std::max(static_cast<double>(n), x);
  int m = static_cast<int>(top + 30.0 + 2.0 * std::sqrt(60.0 * top));
  return m + (m & 1);
}

/// Miller backward recurrence normalized by J_0 + 2 sum J_{2k} = 1, with
/// the requested order's value carried as a log-scaled pair.
inline double bessel_miller(int n, double x) {
  const int M = miller_start(n, x);
  constexpr double kBig = 1e200, kSmall = 1e-200;
  double bp = 0.0, b = 1e-300, sum = 0.0;
  double rec = 0.0;
  int shifts = 0;
  bool recorded = false;
  for (int j = M; j >= 1; --j) {
    const double bm = 2.0 * j / x * b - bp;  // b_{j-1}
    bp = b;
    b = bm;
    if (j - 1 == n) {
      rec = b;
      recorded = true;
    }
    if ((j - 1) % 2 == 0) sum += (j - 1 == 0 ? 1.0 : 2.0) * b;
    if (std::abs(b) > kBig) {
      b *= kSmall;
      bp *= kSmall;
      sum *= kSmall;
      if (recorded) ++shifts;
    }
  }
  if (rec == 0.0) return 0.0;
  const double log_mag = std::log(std::abs(rec)) + shifts * std::log(kSmall) - std::log(std::abs(sum));
  if (log_mag < -745.0) return 0.0;
  return std::copysign(std::exp(log_mag), rec / sum);
}

}  // namespace detail

/// J_n(x) for integer order 0 <= n <= 1e4 and 0 <= x <= 1e8.
inline ComplexEstimate bessel_j(int order, double x) {
  if (order < 0 || order > 10000) throw std::domain_error("bessel_j: order outside [0, 1e4]");
  if (!(x >= 0.0) || x > 1e8) throw std::domain_error("bessel_j: argument outside [0, 1e8]");
  if (x == 0.0) return {{order == 0 ? 1.0 : 0.0, 0.0}, 0.0, Method::exact};
  const double n = order;
  ComplexEstimate out;
  if (x * x <= 4.0 * (n + 1.0)) {
    const auto [v, rel] = detail::bessel_series(order, x);
    out.value = v;
    out.method = Method::series;
    out.abs_error = rel * std::abs(v);
    return out;
  }
  if (x >= std::max(35.0, n * n)) {
    out.value = detail::bessel_hankel(order, x);
    out.method = Method::asymptotic;
    out.abs_error = 1e-13 * std::sqrt(2.0 / (kPi * x));
    return out;
  }
  out.value = detail::bessel_miller(order, x);
  out.method = Method::recurrence;
  const double envelope = x > n ? std::sqrt(2.0 / (kPi * x)) : std::abs(out.value.real());
  out.abs_error = 1e-13 * std::max(envelope, std::abs(out.value.real()));
  return out;
}

inline double bessel_jn(int order, double x) { return bessel_j(order, x).value.real(); }

/// (x/2)^nu / nu!, the small-argument majorant of |J_nu(x)|.
inline double bessel_small_argument_bound(int nu, double x) {
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  return std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
}

namespace detail {

/// B_2, B_4, ..., B_{2*kMaxBernoulli} as doubles, from the exact recurrence.
inline constexpr int kMaxBernoulli = 60;

inline const std::array<double, kMaxBernoulli + 1>& bernoulli_even() {
  static const std::array<double, kMaxBernoulli + 1> table = [] {
    const int top = 2 * kMaxBernoulli;
    std::vector<mpq_class> B(static_cast<std::size_t>(top) + 1);
    B[0] = 1;
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    for (int m = 1; m <= top; ++m) {
      mpq_class s = 0;
      mpz_class binom = 1;  // C(m+1, 0)
      for (int j = 0; j < m; ++j) {
        s += mpq_class(binom) * B[static_cast<std::size_t>(j)];
        binom = binom * (m + 1 - j) / (j + 1);
      }
      B[static_cast<std::size_t>(m)] = -s / (m + 1);
    }
    std::array<double, kMaxBernoulli + 1> t{};
    for (int j = 1; j <= kMaxBernoulli; ++j) t[static_cast<std::size_t>(j)] = B[static_cast<std::size_t>(2 * j)].get_d();
    return t;
  }();
  return table;
}

}  // namespace detail

namespace detail {

/// log sin(pi s), stable for large |Im s| where sin itself overflows.
inline cplx log_sin_pi(cplx s) {
  const cplx z = kPi * s;
  const cplx I(0, 1);
  if (std::abs(z.imag()) < 20.0) return std::log(std::sin(z));
  if (z.imag() > 0) return -I * z + std::log(0.5 * I) + std::log(1.0 - std::exp(2.0 * I * z));
  return I * z - std::log(2.0 * I) + std::log(1.0 - std::exp(-2.0 * I * z));
}

}  // namespace detail

/// log Gamma(s) via Stirling's series with `terms` Bernoulli corrections
/// after lifting to |z| >= 10, Re z >= 1/2; reflection for Re s < 1/2.
/// abs_error bounds the remainder plus rounding.
inline ComplexEstimate gamma_stirling(cplx s, int terms) {
  if (terms < 1 || terms >= detail::kMaxBernoulli) throw std::invalid_argument("gamma_stirling: terms out of range");
  if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
    throw std::domain_error("gamma_stirling: pole at a nonpositive integer");
  if (s.real() < 0.5) {
    // log Gamma(s) = log pi - log sin(pi s) - log Gamma(1 - s)
    const auto g = gamma_stirling(1.0 - s, terms);
    const cplx ls = detail::log_sin_pi(s);
    return {std::log(kPi) - ls - g.value, g.abs_error + 4.0 * detail::kEps * (std::abs(ls) + 2.0), Method::asymptotic};
  }
  constexpr double kLift = 10.0;
  cplx z = s;
  CompensatedSum shift;
  double rounding = 0.0;
  while (std::abs(z) < kLift) {
    const cplx l = std::log(z);
    shift += l;
    rounding += std::abs(l) + 1.0;
    z += 1.0;
  }
  const auto& B = detail::bernoulli_even();
  CompensatedSum acc;
  acc += (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi);
  const cplx zi = 1.0 / z, zi2 = zi * zi;
  cplx zpow = zi;
  for (int j = 1; j <= terms; ++j) {
    acc += B[static_cast<std::size_t>(j)] / ((2.0 * j) * (2.0 * j - 1.0)) * zpow;
    zpow *= zi2;
  }
  const double az = std::abs(z);
  const double theta = std::abs(std::arg(z));
  const int N = terms;
  const double sec = 1.0 / std::cos(0.5 * theta);
  const double remainder = std::abs(B[static_cast<std::size_t>(N + 1)]) / ((2.0 * N + 2.0) * (2.0 * N + 1.0)) *
                           std::pow(az, -(2.0 * N + 1.0)) * std::pow(sec, 2.0 * N + 2.0);
  rounding += std::abs(z - 0.5) * std::abs(std::log(z)) + az + 4.0;
  return {acc.value() - shift.value(), remainder + 4.0 * detail::kEps * rounding, Method::asymptotic};
}

/// Gamma(s) itself, from the log.
inline ComplexEstimate gamma_value(cplx s, int terms = 20) {
  const auto lg = gamma_stirling(s, terms);
  const cplx v = std::exp(lg.value);
  return {v, std::abs(v) * (std::exp(lg.abs_error) - 1.0), Method::asymptotic};
}

/// Leading-order modulus sqrt(2 pi) |t|^{sigma - 1/2} e^{-pi |t| / 2}.
inline double stirling_modulus(double sigma, double t) {
  return std::sqrt(kTwoPi) * std::pow(std::abs(t), sigma - 0.5) * std::exp(-0.5 * kPi * std::abs(t));
}

inline double wrap_phase(double a) { return std::remainder(a, kTwoPi); }

/// Gamma(K/2 + i tau) / Gamma(K/2 - i tau) against three closed-form phases.
struct GammaRatioReport {
  ComplexEstimate ratio;
  double modulus_deviation;  // | |ratio| - 1 |
  double true_phase;
  double stated_phase;   // 2 tau log K - tau/K - tau
  double halved_phase;   // 2 tau log(K/2) - tau/K - tau
  double derived_phase;  // 2 tau log(K/2) - 2 tau/K
  double stated_gap, halved_gap, derived_gap;
};

inline GammaRatioReport gamma_ratio_phase(double K, double tau) {
  if (K < 10.0 || std::abs(tau) > K / 4.0) throw std::invalid_argument("gamma_ratio_phase: need K >= 10, |tau| <= K/4");
  const auto lp = gamma_stirling({0.5 * K, tau}, 20);
  const auto lm = gamma_stirling({0.5 * K, -tau}, 20);
  GammaRatioReport r{};
  const cplx diff = lp.value - lm.value;
  r.ratio = {std::exp(diff), lp.abs_error + lm.abs_error, Method::asymptotic};
  r.modulus_deviation = std::abs(std::abs(r.ratio.value) - 1.0);
  r.true_phase = wrap_phase(diff.imag());
  r.stated_phase = wrap_phase(2.0 * tau * std::log(K) - tau / K - tau);
  r.halved_phase = wrap_phase(2.0 * tau * std::log(0.5 * K) - tau / K - tau);
  r.derived_phase = wrap_phase(2.0 * tau * std::log(0.5 * K) - 2.0 * tau / K);
  r.stated_gap = std::abs(wrap_phase(r.true_phase - r.stated_phase));
  r.halved_gap = std::abs(wrap_phase(r.true_phase - r.halved_phase));
  r.derived_gap = std::abs(wrap_phase(r.true_phase - r.derived_phase));
  return r;
}

/// C_a(v, x) = -2i sin(x sin 2 pi v) + 2 i^{1-a} sin(x cos 2 pi v).
inline cplx bessel_kernel_Ca(int a, double v, double x) {
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx unit = ipow[static_cast<std::size_t>(mod(1 - a, 4))];
  return cplx(0, -2.0) * std::sin(x * std::sin(kTwoPi * v)) + 2.0 * unit * std::sin(x * std::cos(kTwoPi * v));
}

}  // namespace weylcheck
