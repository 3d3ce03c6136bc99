#pragma once

// Kloosterman sums (plain and twisted) and the complete character sums
// that close the dual off-diagonal computation.

#include <algorithm>
#include <vector>

#include "weylcheck/characters.hpp"

namespace weylcheck {

/// S(m, n; c) = sum over units x mod c of e((m x + n xbar) / c), by brute force.
inline cplx kloosterman(std::int64_t m, std::int64_t n, std::int64_t c, const RootTable& roots) {
  if (c < 1) throw std::invalid_argument("kloosterman: c must be >= 1");
  if (roots.modulus() != c) throw std::invalid_argument("kloosterman: root table modulus mismatch");
  if (c == 1) return {1.0, 0.0};
  const std::int64_t mr = mod(m, c), nr = mod(n, c);
  CompensatedSum s;
  for (std::int64_t x = 1; x < c; ++x) {
    const auto xb = inverse_mod(x, c);
    if (!xb) continue;
    s += roots(static_cast<std::int64_t>((static_cast<__int128>(mr) * x + static_cast<__int128>(nr) * *xb) % c));
  }
  return s.value();
}

inline cplx kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw std::invalid_argument("kloosterman: c must be >= 1");
  return kloosterman(m, n, c, RootTable(c));
}

/// Same value assembled from prime-power factors via the twisted
/// multiplicativity S(m,n;c1c2) = S(m c2bar, n c2bar; c1) S(m c1bar, n c1bar; c2).
inline cplx kloosterman_crt(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw std::invalid_argument("kloosterman_crt: c must be >= 1");
  cplx out{1.0, 0.0};
  for (const auto& pp : factorize(c)) {
    const std::int64_t rest = c / pp.pe;
    const std::int64_t rb = require_inverse(rest, pp.pe, "kloosterman_crt");
    out *= kloosterman(mod(m, pp.pe) * rb % pp.pe, mod(n, pp.pe) * rb % pp.pe, pp.pe);
  }
  return out;
}

/// Kloosterman sums S(m, n; c) for one fixed pair (m, n) and every c up to a
/// bound, grown on demand.
class KloostermanColumn {
 public:
  KloostermanColumn(std::int64_t m, std::int64_t n) : m_(m), n_(n) { values_.push_back({}); }
  double operator()(std::int64_t c) {
    while (static_cast<std::int64_t>(values_.size()) <= c) {
      const auto next = static_cast<std::int64_t>(values_.size());
      values_.push_back(kloosterman(m_, n_, next).real());
    }
    return values_[static_cast<std::size_t>(c)];
  }

 private:
  std::int64_t m_, n_;
  std::vector<double> values_;
};

/// S_chi(m, n; c) = sum over units x mod c of chi(x) e((m x + n xbar) / c).
inline cplx twisted_kloosterman(const DirichletCharacter& chi, std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw std::invalid_argument("twisted_kloosterman: c must be >= 1");
  if (c % chi.modulus() != 0) throw std::invalid_argument("twisted_kloosterman: character modulus must divide c");
  if (c == 1) return chi(0);
  const RootTable roots(c);
  const std::int64_t mr = mod(m, c), nr = mod(n, c);
  CompensatedSum s;
  for (std::int64_t x = 1; x < c; ++x) {
    const auto xb = inverse_mod(x, c);
    if (!xb) continue;
    s += chi(x) * roots(static_cast<std::int64_t>((static_cast<__int128>(mr) * x + static_cast<__int128>(nr) * *xb) % c));
  }
  return s.value();
}

/// The three expressions of the twisted factorization, computed independently.
struct TwistedFactorizationReport {
  cplx lhs;        // S_psi(n q^{2+nu}, m'; c q)
  cplx middle;     // S_psi(0, m' cbar; q) S(n q^{1+nu}, m' qbar; c)
  cplx stated;     // sqrt(q) conj(eps) psi(m' cbar) S(n, m' q^nu; c)
  cplx corrected;  // psi(-1) times the stated form
  double lhs_vs_middle;
  double middle_vs_stated;
  double lhs_vs_stated;
  double lhs_vs_corrected;
};

inline TwistedFactorizationReport verify_twisted_factorization(const DirichletCharacter& chi, std::int64_t n,
                                                               std::int64_t mp, int nu, std::int64_t c) {
  const std::int64_t q = chi.modulus();
  if (!is_prime(q)) throw std::invalid_argument("verify_twisted_factorization: q must be prime");
  if (!chi.is_primitive() || !chi.is_odd())
    throw std::invalid_argument("verify_twisted_factorization: character must be primitive and odd");
  if (c < 1 || nu < 0) throw std::invalid_argument("verify_twisted_factorization: need c >= 1, nu >= 0");
  if (gcd(c, q) != 1 || gcd(mp, q) != 1)
    throw std::invalid_argument("verify_twisted_factorization: c and m' must be coprime to q");

  std::int64_t qnu = 1;
  for (int i = 0; i < nu; ++i) qnu *= q;
  const std::int64_t cbar = require_inverse(c, q, "verify_twisted_factorization");
  const std::int64_t qbar = require_inverse(q, c, "verify_twisted_factorization");
  const cplx eps = gauss_sum(chi).epsilon;
  const double sq = std::sqrt(static_cast<double>(q));

  TwistedFactorizationReport r{};
  r.lhs = twisted_kloosterman(chi, n * q * q * qnu, mp, c * q);
  r.middle = twisted_kloosterman(chi, 0, mp * cbar, q) * kloosterman(n * q * qnu, mp * qbar, c);
  r.stated = sq * std::conj(eps) * chi(mp * cbar) * kloosterman(n, mp * qnu, c);
  r.corrected = chi(-1) * r.stated;
  r.lhs_vs_middle = std::abs(r.lhs - r.middle);
  r.middle_vs_stated = std::abs(r.middle - r.stated);
  r.lhs_vs_stated = std::abs(r.lhs - r.stated);
  r.lhs_vs_corrected = std::abs(r.lhs - r.corrected);
  return r;
}

/// C(m, c) = sum over alpha mod c, beta a unit mod c, of e((alpha beta + m betabar + n alpha) / c).
struct CharsumGridResult {
  cplx value;
  std::optional<cplx> closed_form;  // c e(-m nbar / c), only when gcd(n, c) = 1
  std::optional<double> deviation;
};

inline CharsumGridResult charsum_grid(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw std::invalid_argument("charsum_grid: c must be >= 1");
  const RootTable roots(c);
  CompensatedSum s;
  for (std::int64_t beta = 0; beta < c; ++beta) {
    const auto bb = inverse_mod(beta, c);
    if (!bb) continue;
    const std::int64_t base = mod(m, c) * *bb % c;
    for (std::int64_t alpha = 0; alpha < c; ++alpha) s += roots(base + alpha * mod(beta + n, c));
  }
  CharsumGridResult r{s.value(), std::nullopt, std::nullopt};
  if (const auto nb = inverse_mod(n, c)) {
    r.closed_form = static_cast<double>(c) * roots(-mod(m, c) * *nb);
    r.deviation = std::abs(r.value - *r.closed_form);
  }
  return r;
}

/// sum over beta mod c1 c2 of e(-beta n1bar / c1 + beta n2bar / c2 + m beta / (c1 c2)).
struct CharsumCongruenceResult {
  cplx value;
  bool indicator;  // n1bar c2 - n2bar c1 == m mod c1 c2
  double deviation;
};

/// Residue r with the indicator firing exactly when m == r mod c1 c2.
inline std::int64_t congruence_residue(std::int64_t n1, std::int64_t n2, std::int64_t c1, std::int64_t c2) {
  const std::int64_t n1b = require_inverse(n1, c1, "charsum_congruence");
  const std::int64_t n2b = require_inverse(n2, c2, "charsum_congruence");
  return mod(n1b * c2 - n2b * c1, c1 * c2);
}

inline CharsumCongruenceResult charsum_congruence(std::int64_t m, std::int64_t n1, std::int64_t n2, std::int64_t c1,
                                                  std::int64_t c2) {
  if (c1 < 1 || c2 < 1) throw std::invalid_argument("charsum_congruence: moduli must be >= 1");
  const std::int64_t r = congruence_residue(n1, n2, c1, c2);
  const std::int64_t n1b = require_inverse(n1, c1, "charsum_congruence");
  const std::int64_t n2b = require_inverse(n2, c2, "charsum_congruence");
  const std::int64_t L = c1 * c2;
  const RootTable roots(L);
  CompensatedSum s;
  for (std::int64_t beta = 0; beta < L; ++beta) {
    // common denominator c1 c2: -beta n1bar c2 + beta n2bar c1 + m beta
    const std::int64_t num = mod(-beta * n1b % L * c2 + beta * n2b % L * c1 + mod(m, L) * beta, L);
    s += roots(num);
  }
  CharsumCongruenceResult out{s.value(), mod(m, L) == r, 0.0};
  const cplx expected = out.indicator ? cplx(static_cast<double>(L), 0.0) : cplx(0.0, 0.0);
  out.deviation = std::abs(out.value - expected);
  return out;
}

}  // namespace weylcheck
