#pragma once

// Dirichlet characters as exact exponent tables, Gauss sums, and the
// average over odd characters that appears in the dual off-diagonal.

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

#include "weylcheck/core.hpp"

namespace weylcheck {

/// A Dirichlet character mod q. Values are stored as exact exponents:
/// chi(n) = e(exponent(n) / order), or 0 when gcd(n, q) > 1.
class DirichletCharacter {
 public:
  DirichletCharacter(std::int64_t modulus, std::int64_t denominator, std::vector<std::int64_t> numerators)
      : q_(modulus), exps_(std::move(numerators)) {
    std::int64_t g = denominator;
    for (auto x : exps_)
      if (x > 0) g = gcd(g, x);
    order_ = denominator / g;
    for (auto& x : exps_)
      if (x >= 0) x /= g;
    parity_odd_ = (q_ > 2) && exps_[static_cast<std::size_t>(q_ - 1)] * 2 == order_;
    primitive_ = compute_primitive();
  }

  std::int64_t modulus() const { return q_; }
  std::int64_t order() const { return order_; }
  bool is_odd() const { return parity_odd_; }
  bool is_even() const { return !parity_odd_; }
  bool is_primitive() const { return primitive_; }
  bool is_principal() const { return order_ == 1; }

  /// Exponent numerator of chi(n) over order(), or -1 when chi(n) = 0.
  std::int64_t exponent(std::int64_t n) const { return exps_[static_cast<std::size_t>(mod(n, q_))]; }

  cplx operator()(std::int64_t n) const {
    const std::int64_t x = exponent(n);
    if (x < 0) return {0.0, 0.0};
    return e_frac(x, order_);
  }

  /// Exact product of two characters of the same modulus.
  DirichletCharacter operator*(const DirichletCharacter& o) const {
    if (o.q_ != q_) throw std::invalid_argument("character product: modulus mismatch");
    const std::int64_t L = std::lcm(order_, o.order_);
    std::vector<std::int64_t> v(exps_.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = exps_[i] < 0 ? -1 : mod(exps_[i] * (L / order_) + o.exps_[i] * (L / o.order_), L);
    return {q_, L, std::move(v)};
  }

 private:
  bool compute_primitive() const {
    if (q_ == 1) return true;
    for (const auto& pp : factorize(q_)) {
      const std::int64_t d = q_ / pp.p;
      bool induced = true;
      for (std::int64_t n = 1; n < q_ && induced; n += d) {
        if (gcd(n, q_) != 1) continue;
        if (exponent(n) != 0) induced = false;
      }
      if (induced) return false;
    }
    return true;
  }

  std::int64_t q_;
  std::int64_t order_ = 1;
  std::vector<std::int64_t> exps_;
  bool parity_odd_ = false;
  bool primitive_ = false;
};

namespace detail {

// One cyclic factor of (Z/qZ)^*: discrete logs of residues mod pe with
// respect to a fixed generator; -1 marks residues outside the factor's
// domain (non-units).
struct CyclicFactor {
  std::int64_t pe;
  std::int64_t order;
  std::vector<std::int64_t> log;
};

inline std::int64_t primitive_root_prime(std::int64_t p) {
  if (p == 2) return 1;
  const auto fs = factorize(p - 1);
  for (std::int64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& f : fs)
      if (pow_mod(g, (p - 1) / f.p, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root");
}

inline std::vector<CyclicFactor> cyclic_decomposition(std::int64_t q) {
  std::vector<CyclicFactor> out;
  if (q == 1) return out;
  for (const auto& pp : factorize(q)) {
    const auto pe = pp.pe;
    if (pp.p == 2) {
      if (pp.e == 1) continue;  // (Z/2)^* is trivial
      if (pp.e == 2) {
        CyclicFactor f{4, 2, std::vector<std::int64_t>(4, -1)};
        f.log[1] = 0;
        f.log[3] = 1;
        out.push_back(std::move(f));
        continue;
      }
      // (Z/2^e)^* = <-1> x <5>
      const std::int64_t half = pe / 4;
      CyclicFactor sign{pe, 2, std::vector<std::int64_t>(static_cast<std::size_t>(pe), -1)};
      CyclicFactor five{pe, half, std::vector<std::int64_t>(static_cast<std::size_t>(pe), -1)};
      std::int64_t x = 1;
      for (std::int64_t b = 0; b < half; ++b) {
        sign.log[static_cast<std::size_t>(x)] = 0;
        five.log[static_cast<std::size_t>(x)] = b;
        sign.log[static_cast<std::size_t>(pe - x)] = 1;
        five.log[static_cast<std::size_t>(pe - x)] = b;
        x = x * 5 % pe;
      }
      out.push_back(std::move(sign));
      out.push_back(std::move(five));
      continue;
    }
    std::int64_t g = primitive_root_prime(pp.p);
    if (pp.e > 1 && pow_mod(g, pp.p - 1, pp.p * pp.p) == 1) g += pp.p;
    const std::int64_t ord = pe / pp.p * (pp.p - 1);
    CyclicFactor f{pe, ord, std::vector<std::int64_t>(static_cast<std::size_t>(pe), -1)};
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < ord; ++k) {
      f.log[static_cast<std::size_t>(x)] = k;
      x = x * g % pe;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace detail

/// All phi(q) characters mod q, principal first.
inline std::vector<DirichletCharacter> enumerate_characters(std::int64_t q) {
  if (q < 1) throw std::invalid_argument("enumerate_characters: q must be >= 1");
  const auto factors = detail::cyclic_decomposition(q);
  std::int64_t L = 1;
  for (const auto& f : factors) L = std::lcm(L, f.order);

  // Combined log vector per residue (one entry per factor), -1 for non-units.
  const auto uq = static_cast<std::size_t>(q);
  std::vector<std::vector<std::int64_t>> logs(uq);
  for (std::int64_t n = 0; n < q; ++n) {
    if (gcd(n, q) != 1) continue;
    auto& l = logs[static_cast<std::size_t>(n)];
    for (const auto& f : factors) l.push_back(f.log[static_cast<std::size_t>(n % f.pe)]);
  }

  std::vector<DirichletCharacter> out;
  std::vector<std::int64_t> idx(factors.size(), 0);
  while (true) {
    std::vector<std::int64_t> exps(uq, -1);
    for (std::int64_t n = 0; n < q; ++n) {
      if (gcd(n, q) != 1) continue;
      std::int64_t s = 0;
      const auto& l = logs[static_cast<std::size_t>(n)];
      for (std::size_t i = 0; i < factors.size(); ++i) s += idx[i] * l[i] * (L / factors[i].order);
      exps[static_cast<std::size_t>(n)] = mod(s, L);
    }
    out.emplace_back(q, L, std::move(exps));
    std::size_t i = 0;
    for (; i < factors.size(); ++i) {
      if (++idx[i] < factors[i].order) break;
      idx[i] = 0;
    }
    if (i == factors.size()) break;
  }
  return out;
}

struct GaussSumResult {
  cplx g;
  cplx epsilon;
  /// | |g| - sqrt(q) |, meaningful for primitive characters.
  std::optional<double> modulus_deviation;
};

inline GaussSumResult gauss_sum(const DirichletCharacter& chi) {
  const std::int64_t q = chi.modulus();
  CompensatedSum s;
  for (std::int64_t a = 0; a < q; ++a) {
    const std::int64_t x = chi.exponent(a);
    if (x < 0) continue;
    // chi(a) e(a/q) = e(x/order + a/q), reduced over the common denominator
    const std::int64_t den = std::lcm(chi.order(), q);
    s += e_frac(x * (den / chi.order()) + a * (den / q), den);
  }
  GaussSumResult r{s.value(), s.value() / std::sqrt(static_cast<double>(q)), std::nullopt};
  if (chi.is_primitive()) r.modulus_deviation = std::abs(std::abs(r.g) - std::sqrt(static_cast<double>(q)));
  return r;
}

/// Characters mod q together with their Gauss sums.
class CharacterGroup {
 public:
  explicit CharacterGroup(std::int64_t q) : q_(q), chars_(enumerate_characters(q)) {
    gauss_.reserve(chars_.size());
    for (const auto& c : chars_) gauss_.push_back(gauss_sum(c));
  }
  std::int64_t modulus() const { return q_; }
  const std::vector<DirichletCharacter>& characters() const { return chars_; }
  const GaussSumResult& gauss(std::size_t i) const { return gauss_[i]; }
  std::size_t size() const { return chars_.size(); }

 private:
  std::int64_t q_;
  std::vector<DirichletCharacter> chars_;
  std::vector<GaussSumResult> gauss_;
};

/// (1/2) sum_psi (1 - psi(-1)) eps_psi^2 conj(eps_psi) psi(m' cbar) conj(psi(m' l)),
/// evaluated by brute force over every character mod q.
inline cplx odd_character_average(const CharacterGroup& grp, std::int64_t c, std::int64_t l, std::int64_t mp) {
  const std::int64_t q = grp.modulus();
  if (q < 3) throw std::invalid_argument("odd_character_average: q must be >= 3");
  if (gcd(c, q) != 1 || gcd(l, q) != 1 || gcd(mp, q) != 1)
    throw std::invalid_argument("odd_character_average: c, l, m' must be coprime to q");
  const std::int64_t cbar = require_inverse(c, q, "odd_character_average");
  CompensatedSum s;
  for (std::size_t i = 0; i < grp.size(); ++i) {
    const auto& psi = grp.characters()[i];
    const cplx w = 1.0 - psi(-1);
    if (std::abs(w) == 0.0) continue;
    const cplx eps = grp.gauss(i).epsilon;
    s += 0.5 * w * eps * eps * std::conj(eps) * psi(mp * cbar) * std::conj(psi(mp * l));
  }
  return s.value();
}

inline cplx odd_character_average(std::int64_t q, std::int64_t c, std::int64_t l, std::int64_t mp) {
  return odd_character_average(CharacterGroup(q), c, l, mp);
}

/// Closed-form candidate (phi(q) / (2 sqrt q)) * u * (e(x/q) - e(-x/q)).
struct AverageCandidate {
  int sign;           // u in {+1, -1}
  bool inverse;       // x = inverse of c*l (true) or c*l itself (false)
  double max_deviation = 0.0;
};

struct AverageConvention {
  std::int64_t q;
  std::array<AverageCandidate, 4> candidates;
  std::optional<std::size_t> matched;  // index of the unique candidate within tolerance
  double m_prime_spread = 0.0;         // max variation over m' at fixed (c, l)
};

inline cplx average_candidate_value(std::int64_t q, std::int64_t c, std::int64_t l, int sign, bool inverse) {
  std::int64_t x = mod(c * l, q);
  if (inverse) x = require_inverse(x, q, "average_candidate_value");
  const double scale = static_cast<double>(totient(q)) / (2.0 * std::sqrt(static_cast<double>(q)));
  return static_cast<double>(sign) * scale * (e_frac(x, q) - e_frac(-x, q));
}

/// Sweeps every admissible (c, l, m') mod q and reports which of the four
/// closed-form readings matches the brute force.
inline AverageConvention discover_average_convention(std::int64_t q, double tol = 1e-9) {
  const CharacterGroup grp(q);
  AverageConvention conv{q, {AverageCandidate{+1, false}, {-1, false}, {+1, true}, {-1, true}}, std::nullopt, 0.0};
  for (std::int64_t c = 1; c < q; ++c) {
    if (gcd(c, q) != 1) continue;
    for (std::int64_t l = 1; l < q; ++l) {
      if (gcd(l, q) != 1) continue;
      std::optional<cplx> first;
      for (std::int64_t mp = 1; mp < q; ++mp) {
        if (gcd(mp, q) != 1) continue;
        const cplx v = odd_character_average(grp, c, l, mp);
        if (!first) first = v;
        conv.m_prime_spread = std::max(conv.m_prime_spread, std::abs(v - *first));
        for (auto& cand : conv.candidates)
          cand.max_deviation =
              std::max(cand.max_deviation, std::abs(v - average_candidate_value(q, c, l, cand.sign, cand.inverse)));
      }
    }
  }
  for (std::size_t i = 0; i < conv.candidates.size(); ++i)
    if (conv.candidates[i].max_deviation < tol) {
      conv.matched = i;
      break;
    }
  return conv;
}

}  // namespace weylcheck
