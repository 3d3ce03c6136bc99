#pragma once

// Shared numeric plumbing: complex estimates, additive characters e(x),
// compensated summation and elementary modular arithmetic.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace weylcheck {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Method { exact, series, recurrence, asymptotic, quadrature };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::series: return "series";
    case Method::recurrence: return "recurrence";
    case Method::asymptotic: return "asymptotic";
    case Method::quadrature: return "quadrature";
  }
  return "?";
}

/// A value together with a claimed bound on |value - truth|.
struct ComplexEstimate {
  cplx value{};
  double abs_error = 0.0;
  Method method = Method::exact;
};

/// e(x) = exp(2 pi i x), with the integer part of x removed first.
inline cplx e(double x) {
  const double frac = x - std::floor(x);
  return std::polar(1.0, kTwoPi * frac);
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// e(a/c) computed from the reduced residue a mod c.
inline cplx e_frac(std::int64_t a, std::int64_t c) {
  return std::polar(1.0, kTwoPi * static_cast<double>(mod(a, c)) / static_cast<double>(c));
}

/// Table of c-th roots of unity, indexed by residue.
class RootTable {
 public:
  explicit RootTable(std::int64_t c) : c_(c), roots_(static_cast<std::size_t>(c)) {
    if (c < 1) throw std::invalid_argument("RootTable: modulus must be positive");
    for (std::int64_t a = 0; a < c; ++a) roots_[static_cast<std::size_t>(a)] = e_frac(a, c);
  }
  std::int64_t modulus() const { return c_; }
  const cplx& operator()(std::int64_t a) const { return roots_[static_cast<std::size_t>(mod(a, c_))]; }

 private:
  std::int64_t c_;
  std::vector<cplx> roots_;
};

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(cplx z) {
    add_part(re_, re_c_, z.real());
    add_part(im_, im_c_, z.imag());
  }
  CompensatedSum& operator+=(cplx z) {
    add(z);
    return *this;
  }
  cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

/// Inverse of a modulo m by extended Euclid; nullopt when gcd(a, m) > 1.
/// Modulus 1 has the single residue 0, which is its own inverse.
inline std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("inverse_mod: modulus must be positive");
  if (m == 1) return 0;
  std::int64_t r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
  }
  if (r0 != 1) return std::nullopt;
  return mod(s0, m);
}

inline std::int64_t require_inverse(std::int64_t a, std::int64_t m, const char* what) {
  auto inv = inverse_mod(a, m);
  if (!inv) throw std::invalid_argument(std::string(what) + ": argument not invertible modulo " + std::to_string(m));
  return *inv;
}

struct PrimePower {
  std::int64_t p;
  int e;
  std::int64_t pe;
};

inline std::vector<PrimePower> factorize(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  std::vector<PrimePower> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
      pp.pe *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline std::int64_t totient(std::int64_t n) {
  std::int64_t phi = n;
  for (const auto& pp : factorize(n)) phi = phi / pp.p * (pp.p - 1);
  return phi;
}

inline std::int64_t divisor_count(std::int64_t n) {
  std::int64_t d = 1;
  for (const auto& pp : factorize(n)) d *= pp.e + 1;
  return d;
}

/// Divisor counts d(1..n) by sieve; entry 0 unused.
inline std::vector<std::int64_t> divisor_count_table(std::size_t n) {
  std::vector<std::int64_t> d(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; j += i) ++d[j];
  return d;
}

inline std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  b = mod(b, m);
  while (e > 0) {
    if (e & 1) r = static_cast<std::int64_t>((static_cast<__int128>(r) * b) % m);
    b = static_cast<std::int64_t>((static_cast<__int128>(b) * b) % m);
    e >>= 1;
  }
  return r;
}

}  // namespace weylcheck
