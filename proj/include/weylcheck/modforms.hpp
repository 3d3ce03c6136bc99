#pragma once

// Level-1 cusp forms: Victor-Miller basis with exact integer q-expansions,
// Hecke operators, eigenforms and coefficient-bound diagnostics.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "weylcheck/core.hpp"

namespace weylcheck {

inline constexpr mp_bitcnt_t kEigenBits = 512;

/// Truncated integer q-expansion a(0..prec).
struct QExpansion {
  int weight = 0;
  std::vector<mpz_class> coeffs;
  std::size_t prec() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  const mpz_class& operator[](std::size_t n) const { return coeffs.at(n); }
};

inline int cusp_dimension(int k) {
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("cusp_dimension: weight must be even and >= 4");
  return k / 12 - (k % 12 == 2 ? 1 : 0);
}

namespace detail {

using Series = std::vector<mpz_class>;

inline Series multiply(const Series& a, const Series& b, std::size_t prec) {
  Series out(prec + 1, 0);
  for (std::size_t i = 0; i < a.size() && i <= prec; ++i) {
    if (a[i] == 0) continue;
    const std::size_t jmax = std::min(b.size() - 1, prec - i);
    for (std::size_t j = 0; j <= jmax; ++j)
      if (b[j] != 0) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Eisenstein series 1 + scale * sum sigma_{power}(n) q^n.
inline Series eisenstein(int power, long scale, std::size_t prec) {
  Series sigma(prec + 1, 0);
  for (std::size_t d = 1; d <= prec; ++d) {
    mpz_class dp;
    mpz_ui_pow_ui(dp.get_mpz_t(), d, static_cast<unsigned long>(power));
    for (std::size_t n = d; n <= prec; n += d) sigma[n] += dp;
  }
  Series out(prec + 1);
  out[0] = 1;
  for (std::size_t n = 1; n <= prec; ++n) out[n] = sigma[n] * scale;
  return out;
}

/// q^j prod (1 - q^n)^{24 j}, via the Jacobi triple-product series
/// prod (1 - q^n)^3 = sum (-1)^m (2m+1) q^{m(m+1)/2}, which is sparse.
inline Series delta_power(int j, std::size_t prec) {
  Series out(prec + 1, 0);
  if (static_cast<std::size_t>(j) > prec) return out;
  const std::size_t len = prec - static_cast<std::size_t>(j);
  std::vector<std::pair<std::size_t, long>> jacobi;
  for (long m = 0;; ++m) {
    const auto e = static_cast<std::size_t>(m * (m + 1) / 2);
    if (e > len) break;
    jacobi.emplace_back(e, (m % 2 == 0 ? 1 : -1) * (2 * m + 1));
  }
  Series acc(len + 1, 0);
  acc[0] = 1;
  for (int rep = 0; rep < 8 * j; ++rep) {
    Series next(len + 1, 0);
    for (std::size_t i = 0; i <= len; ++i) {
      if (acc[i] == 0) continue;
      for (const auto& [e, c] : jacobi) {
        if (i + e > len) break;
        next[i + e] += acc[i] * c;
      }
    }
    acc.swap(next);
  }
  for (std::size_t i = 0; i <= len; ++i) out[i + static_cast<std::size_t>(j)] = acc[i];
  return out;
}

}  // namespace detail

/// The discriminant form to precision prec.
inline QExpansion delta_expansion(std::size_t prec) { return {12, detail::delta_power(1, prec)}; }

/// Echelonized integral basis f_1..f_d of S_k with f_i(j) = [i == j] for 1 <= j <= d.
inline std::vector<QExpansion> victor_miller_basis(int k, std::size_t prec) {
  const int d = cusp_dimension(k);
  if (prec < static_cast<std::size_t>(d) + 2) throw std::invalid_argument("victor_miller_basis: prec too small");
  std::vector<QExpansion> basis;
  if (d == 0) return basis;
  const auto e4 = detail::eisenstein(3, 240, prec);
  const auto e6 = detail::eisenstein(5, -504, prec);
  for (int j = 1; j <= d; ++j) {
    const int r = k - 12 * j;
    const int b = (r % 4 == 2) ? 1 : 0;
    const int a = (r - 6 * b) / 4;
    auto f = detail::delta_power(j, prec);
    for (int i = 0; i < a; ++i) f = detail::multiply(f, e4, prec);
    if (b == 1) f = detail::multiply(f, e6, prec);
    basis.push_back({k, std::move(f)});
  }
  for (int j = d - 1; j >= 1; --j)
    for (int i = j + 1; i <= d; ++i) {
      const mpz_class factor = basis[static_cast<std::size_t>(j - 1)].coeffs[static_cast<std::size_t>(i)];
      if (factor == 0) continue;
      auto& fj = basis[static_cast<std::size_t>(j - 1)].coeffs;
      const auto& fi = basis[static_cast<std::size_t>(i - 1)].coeffs;
      for (std::size_t n = 0; n <= prec; ++n) fj[n] -= factor * fi[n];
    }
  return basis;
}

/// Coefficient m of T_n f: sum over d | gcd(m, n) of d^{k-1} a(mn/d^2).
inline mpz_class hecke_coefficient(const QExpansion& f, std::size_t n, std::size_t m) {
  if (m * n > f.prec())
    throw std::out_of_range("hecke_coefficient: needs a(" + std::to_string(m * n) + "), have prec " +
                            std::to_string(f.prec()));
  mpz_class out = 0;
  const auto g = static_cast<std::size_t>(gcd(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)));
  for (std::size_t d = 1; d <= g; ++d) {
    if (g % d != 0) continue;
    mpz_class dk;
    mpz_ui_pow_ui(dk.get_mpz_t(), d, static_cast<unsigned long>(f.weight - 1));
    out += dk * f.coeffs[m * n / (d * d)];
  }
  return out;
}

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Matrix of T_n in an echelon basis: T_n f_i = sum_j M[i][j] f_j.
inline IntMatrix hecke_matrix(const std::vector<QExpansion>& basis, std::size_t n) {
  const std::size_t d = basis.size();
  IntMatrix M(d, std::vector<mpz_class>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) M[i][j] = hecke_coefficient(basis[i], n, j + 1);
  return M;
}

namespace detail {

using QPoly = std::vector<mpq_class>;  // low degree first

inline void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier.
inline QPoly characteristic_polynomial(const IntMatrix& A) {
  const std::size_t n = A.size();
  std::vector<std::vector<mpq_class>> Mk(n, std::vector<mpq_class>(n, 0));
  QPoly c(n + 1, 0);
  c[n] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    // Mk <- A * M_{k-1} + c_{n-k+1} I
    std::vector<std::vector<mpq_class>> next(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        mpq_class s = 0;
        for (std::size_t l = 0; l < n; ++l) s += mpq_class(A[i][l]) * Mk[l][j];
        next[i][j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    Mk.swap(next);
    mpq_class tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += mpq_class(A[i][l]) * Mk[l][i];
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

inline QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  return d;
}

inline QPoly remainder(QPoly a, const QPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    trim(a);
  }
  return a;
}

inline mpq_class evaluate(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

inline mpf_class evaluate(const QPoly& p, const mpf_class& x) {
  mpf_class acc(0, kEigenBits);
  for (std::size_t i = p.size(); i-- > 0;) {
    acc *= x;
    acc += mpf_class(p[i], kEigenBits);
  }
  return acc;
}

inline int sign_changes(const std::vector<QPoly>& chain, const mpq_class& x) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    const int s = sgn(evaluate(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Real roots of a square-free polynomial, ascending, to kEigenBits bits.
inline std::vector<mpf_class> real_roots(const QPoly& p) {
  std::vector<QPoly> chain{p, derivative(p)};
  while (true) {
    auto r = remainder(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& x : r) x = -x;
    chain.push_back(std::move(r));
  }
  if (chain.back().size() > 1) throw std::runtime_error("hecke_eigenforms: repeated eigenvalue");

  mpq_class bound = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) bound = std::max(bound, mpq_class(abs(p[i] / p.back())));
  bound += 1;

  std::vector<std::pair<mpq_class, mpq_class>> isolated;
  std::vector<std::pair<mpq_class, mpq_class>> stack{{-bound, bound}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const int count = sign_changes(chain, a) - sign_changes(chain, b);
    if (count == 0) continue;
    if (count == 1) {
      isolated.emplace_back(a, b);
      continue;
    }
    const mpq_class mid = (a + b) / 2;
    stack.emplace_back(a, mid);
    stack.emplace_back(mid, b);
  }
  std::vector<mpf_class> roots;
  for (auto& [a, b] : isolated) {
    // root lies in (a, b]; bisect on the sign of p in extended precision
    mpf_class lo(a, kEigenBits), hi(b, kEigenBits);
    const int shi = sgn(evaluate(p, hi));
    if (shi == 0) {
      roots.push_back(hi);
      continue;
    }
    for (int it = 0; it < static_cast<int>(kEigenBits) + 64; ++it) {
      mpf_class mid(lo + hi, kEigenBits);
      mid /= 2;
      const int sm = sgn(evaluate(p, mid));
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm == shi)
        hi = mid;
      else
        lo = mid;
    }
    mpf_class r(lo + hi, kEigenBits);
    r /= 2;
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Null vector of (A^T - lambda I) normalized to first entry 1.
inline std::vector<mpf_class> eigenvector(const IntMatrix& A, const mpf_class& lambda) {
  const std::size_t n = A.size();
  std::vector<std::vector<mpf_class>> B(n, std::vector<mpf_class>(n, mpf_class(0, kEigenBits)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      B[i][j] = mpf_class(A[j][i], kEigenBits);
      if (i == j) B[i][j] -= lambda;
    }
  // Gaussian elimination with full pivoting; the final pivot is numerically zero.
  std::vector<std::size_t> col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = i;
  for (std::size_t r = 0; r + 1 < n; ++r) {
    std::size_t pi = r, pj = r;
    mpf_class best(0, kEigenBits);
    for (std::size_t i = r; i < n; ++i)
      for (std::size_t j = r; j < n; ++j)
        if (abs(B[i][col[j]]) > best) {
          best = abs(B[i][col[j]]);
          pi = i;
          pj = j;
        }
    std::swap(B[r], B[pi]);
    std::swap(col[r], col[pj]);
    for (std::size_t i = r + 1; i < n; ++i) {
      mpf_class f(B[i][col[r]] / B[r][col[r]], kEigenBits);
      for (std::size_t j = r; j < n; ++j) B[i][col[j]] -= f * B[r][col[j]];
    }
  }
  std::vector<mpf_class> x(n, mpf_class(0, kEigenBits));
  x[col[n - 1]] = 1;
  for (std::size_t r = n - 1; r-- > 0;) {
    mpf_class s(0, kEigenBits);
    for (std::size_t j = r + 1; j < n; ++j) s += B[r][col[j]] * x[col[j]];
    x[col[r]] = -s / B[r][col[r]];
  }
  if (x[0] == 0) throw std::runtime_error("hecke_eigenforms: eigenvector with vanishing first coefficient");
  const mpf_class lead(x[0], kEigenBits);
  for (auto& v : x) v /= lead;
  return x;
}

}  // namespace detail

/// A normalized Hecke eigenform of level 1.
struct Eigenform {
  int weight = 0;
  int space_dim = 0;
  mpf_class t2_eigenvalue{0, kEigenBits};
  std::vector<mpf_class> arithmetic;  // a(0..prec), a(1) = 1
  std::vector<double> lambda;         // a(n) / n^{(k-1)/2}, index 0 unused

  std::size_t prec() const { return lambda.empty() ? 0 : lambda.size() - 1; }
  std::string eigenvalue_string(int digits = 40) const {
    mp_exp_t exp = 0;
    std::string s = t2_eigenvalue.get_str(exp, 10, static_cast<std::size_t>(digits));
    return s + "e" + std::to_string(exp);
  }
};

namespace detail {

inline std::vector<double> normalize_coefficients(int k, const std::vector<mpf_class>& a) {
  std::vector<double> lambda(a.size(), 0.0);
  for (std::size_t n = 1; n < a.size(); ++n) {
    // divide in extended precision: a(n) grows like n^{(k-1)/2}
    mpf_class scale(static_cast<unsigned long>(n), kEigenBits);
    mpf_class root(0, kEigenBits);
    mpf_sqrt(root.get_mpf_t(), scale.get_mpf_t());
    mpf_class denom(1, kEigenBits);
    for (int i = 0; i < k - 1; ++i) denom *= root;
    mpf_class v(a[n] / denom, kEigenBits);
    lambda[n] = v.get_d();
  }
  return lambda;
}

}  // namespace detail

/// Eigenforms of T_2 on S_k, coefficients through prec.
inline std::vector<Eigenform> hecke_eigenforms(int k, std::size_t prec) {
  const int d = cusp_dimension(k);
  if (d < 1) throw std::invalid_argument("hecke_eigenforms: S_k is empty");
  const std::size_t need = std::max(prec, 2 * static_cast<std::size_t>(d) + 2);
  const auto basis = victor_miller_basis(k, need);
  std::vector<Eigenform> out;
  if (d == 1) {
    Eigenform f;
    f.weight = k;
    f.space_dim = 1;
    f.arithmetic.reserve(prec + 1);
    for (std::size_t n = 0; n <= prec; ++n) f.arithmetic.emplace_back(basis[0].coeffs[n], kEigenBits);
    f.t2_eigenvalue = mpf_class(basis[0].coeffs[2], kEigenBits);
    f.lambda = detail::normalize_coefficients(k, f.arithmetic);
    out.push_back(std::move(f));
    return out;
  }
  const auto M = hecke_matrix(basis, 2);
  const auto roots = detail::real_roots(detail::characteristic_polynomial(M));
  for (const auto& lam : roots) {
    const auto c = detail::eigenvector(M, lam);
    Eigenform f;
    f.weight = k;
    f.space_dim = d;
    f.t2_eigenvalue = lam;
    f.arithmetic.assign(prec + 1, mpf_class(0, kEigenBits));
    for (std::size_t n = 0; n <= prec; ++n)
      for (std::size_t i = 0; i < basis.size(); ++i) f.arithmetic[n] += c[i] * mpf_class(basis[i].coeffs[n], kEigenBits);
    f.lambda = detail::normalize_coefficients(k, f.arithmetic);
    out.push_back(std::move(f));
  }
  return out;
}

/// The normalized discriminant form, directly from its product expansion.
inline Eigenform delta_eigenform(std::size_t prec) {
  const auto delta = delta_expansion(prec);
  Eigenform f;
  f.weight = 12;
  f.space_dim = 1;
  f.t2_eigenvalue = mpf_class(delta.coeffs.at(2), kEigenBits);
  f.arithmetic.reserve(prec + 1);
  for (std::size_t n = 0; n <= prec; ++n) f.arithmetic.emplace_back(delta.coeffs[n], kEigenBits);
  f.lambda = detail::normalize_coefficients(12, f.arithmetic);
  return f;
}

struct CoefficientBoundReport {
  std::size_t X = 0;
  double max_deligne_ratio = 0.0;  // max |lambda(n)| / d(n)
  std::size_t argmax = 1;
  std::vector<std::pair<std::size_t, double>> rankin_selberg;  // (x, sum_{n<=x} lambda^2 / x)
  double rs_min = 0.0, rs_max = 0.0;
  bool deligne_ok = false;
  bool rs_ok = false;
};

inline CoefficientBoundReport coefficient_bound_report(const std::vector<double>& lambda, std::size_t X) {
  if (X < 1 || X >= lambda.size())
    throw std::out_of_range("coefficient_bound_report: X exceeds available coefficients");
  CoefficientBoundReport r;
  r.X = X;
  const auto dtab = divisor_count_table(X);
  double partial = 0.0;
  std::size_t next = 1;
  r.rs_min = 1e300;
  r.rs_max = 0.0;
  for (std::size_t n = 1; n <= X; ++n) {
    const double ratio = std::abs(lambda[n]) / static_cast<double>(dtab[n]);
    if (ratio > r.max_deligne_ratio) {
      r.max_deligne_ratio = ratio;
      r.argmax = n;
    }
    partial += lambda[n] * lambda[n];
    if (n == next || n == X) {
      const double v = partial / static_cast<double>(n);
      r.rankin_selberg.emplace_back(n, v);
      r.rs_min = std::min(r.rs_min, v);
      r.rs_max = std::max(r.rs_max, v);
      if (n == next) next *= 2;
    }
  }
  r.deligne_ok = r.max_deligne_ratio <= 1.0 + 1e-10;
  r.rs_ok = r.rs_min >= 0.1 && r.rs_max <= 10.0;
  return r;
}

inline CoefficientBoundReport coefficient_bound_report(const Eigenform& f, std::size_t X) {
  return coefficient_bound_report(f.lambda, X);
}

}  // namespace weylcheck
