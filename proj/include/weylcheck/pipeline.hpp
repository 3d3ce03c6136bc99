#pragma once

// Numerical reenactment of the dual off-diagonal analysis: the Poisson step for
// the twisted Kloosterman sum, the integrals I(m, n, c) and J(m), and the off-diagonal assembly.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylcheck/core.hpp"
#include "weylcheck/expsums.hpp"
#include "weylcheck/oscint.hpp"
#include "weylcheck/report.hpp"

namespace weylcheck {

/// N main length, t height, K weight scale, Q modulus scale. The dual length
/// Ntilde = Q^2 K^4 / N is always derived.
struct PipelineParams {
  double N = 1e4, t = 1e3, K = 10, Q = 100;

  double ntilde() const { return Q * Q * K * K * K * K / N; }
  double C() const { return Q; }

  void validate() const {
    if (!(N > 0 && t >= 0 && K > 0 && Q > 0)) throw std::invalid_argument("PipelineParams: N, K, Q must be positive, t >= 0");
    if (K * K > std::max(t, 1.0) * (1 + 1e-12))
      throw std::invalid_argument("PipelineParams: need K <= t^{1/2}");
  }

  /// Q defaults to N / K^2. A caller-supplied Ntilde is checked, never used.
  static PipelineParams make(double N, double t, std::optional<double> K = {}, std::optional<double> Q = {},
                             std::optional<double> ntilde_claim = {}) {
    PipelineParams p;
    p.N = N;
    p.t = t;
    p.K = K ? *K : std::max(1.0, std::round(std::cbrt(t)));
    p.Q = Q ? *Q : N / (p.K * p.K);
    p.validate();
    if (ntilde_claim && std::abs(*ntilde_claim - p.ntilde()) > 1e-9 * p.ntilde())
      throw std::invalid_argument("PipelineParams: Ntilde " + std::to_string(*ntilde_claim) +
                                  " is inconsistent with Q^2 K^4 / N = " + std::to_string(p.ntilde()));
    return p;
  }
};

/// The weight W (and U) of the dual analysis: the standard bump on [1, 2].
inline const SmoothWeight& pipeline_weight() {
  static const SmoothWeight w = bump(1.0, 2.0);
  return w;
}

// ---------------------------------------------------------------- I(m, n, c)

/// Phase of v^{it} e((sqrt(m N v) - n N v) / c) in radians, with derivatives.
inline PhaseSpec i_phase(double m, std::int64_t n, std::int64_t c, double N, double t) {
  const double a = kTwoPi * std::sqrt(m * N) / static_cast<double>(c);
  const double b = kTwoPi * static_cast<double>(n) * N / static_cast<double>(c);
  PhaseSpec h;
  h.h = [=](double v) { return t * std::log(v) + a * std::sqrt(v) - b * v; };
  h.d1 = [=](double v) { return t / v + 0.5 * a / std::sqrt(v) - b; };
  h.d2 = [=](double v) { return -t / (v * v) - 0.25 * a / (v * std::sqrt(v)); };
  h.Y = t + a + std::abs(b);
  h.Q = 1.0;
  return h;
}

inline constexpr double kInnerTol = 1e-12;

/// Target accuracy for an integral over [1, 2] whose phase reaches max_phase radians.
inline double inner_tol(double max_phase) { return std::max(kInnerTol, 64 * detail::kEps * max_phase); }

/// I(m, n, c) = int v^{it} W(v) e((sqrt(m N v) - n N v) / c) dv.
inline ComplexEstimate i_value(double m, std::int64_t n, std::int64_t c, double N, double t) {
  if (m < 0) throw std::invalid_argument("i_integral: m must be >= 0");
  if (c < 1) throw std::invalid_argument("i_integral: c must be >= 1");
  const auto h = i_phase(m, n, c, N, t);
  return oscillatory_quadrature(pipeline_weight(), h, inner_tol(2 * h.Y));
}

struct IIntegralReport {
  ComplexEstimate estimate;
  double r = 0.0;      // min |f''| over the support, f the phase in cycles
  double bound = 0.0;  // 8 max|W| / sqrt(r)
  double ratio = 0.0;  // |I| / bound
  Verdict verdict = Verdict::inconclusive;
};

inline IIntegralReport i_integral(std::int64_t m, std::int64_t n, std::int64_t c, const PipelineParams& p) {
  p.validate();
  IIntegralReport rep;
  rep.estimate = i_value(static_cast<double>(m), n, c, p.N, p.t);
  const auto h = i_phase(static_cast<double>(m), n, c, p.N, p.t);
  constexpr int grid = 512;
  rep.r = std::numeric_limits<double>::infinity();
  double wmax = 0.0;
  const auto& W = pipeline_weight();
  for (int i = 0; i <= grid; ++i) {
    const double v = W.a + (W.b - W.a) * i / grid;
    rep.r = std::min(rep.r, std::abs(h.second(v)) / kTwoPi);
    wmax = std::max(wmax, W(std::clamp(v, W.a + 1e-12, W.b - 1e-12)));
  }
  if (p.t == 0) return rep;  // outside the regime of the bound
  rep.bound = 8 * wmax / std::sqrt(rep.r);
  rep.ratio = std::abs(rep.estimate.value) / rep.bound;
  rep.verdict = verdict_of(std::abs(rep.estimate.value) <= rep.bound + rep.estimate.abs_error);
  return rep;
}

/// Dual index n placing the stationary point of I(m, n, c) at v0.
inline std::int64_t stationary_index(double m, std::int64_t c, double N, double t, double v0 = 1.5) {
  const double cd = static_cast<double>(c);
  const double rate = t / v0 + kPi * std::sqrt(m * N) / (cd * std::sqrt(v0));
  return std::max<std::int64_t>(1, std::llround(rate * cd / (kTwoPi * N)));
}

// ---------------------------------------------------------------- Poisson check

struct PoissonReport {
  std::int64_t m = 0, c = 0;
  double N = 0, t = 0;
  cplx direct, dual;
  double trivial_bound = 0.0;     // sum |S(n, m; c)| W(n / N)
  double relative_gap = 0.0;      // |direct - dual| / trivial_bound
  double quadrature_error = 0.0;  // accumulated dual-side error, relative to trivial_bound
  double nominal_cutoff = 0.0;      // c t / N
  std::int64_t n_lo = 0, n_hi = 0;
  std::size_t dual_terms = 0;
  double tail_beyond = 0.0;       // sum |term| over n > 8 c t / N, relative to trivial_bound
  double nonpositive = 0.0;       // sum |term| over n <= 0, relative to trivial_bound
  Verdict verdict = Verdict::fail;
};

/// Direct sum n^{it} e(sqrt(nm)/c) S(n,m;c) W(n/N) against the Poisson dual
/// (N^{1+it}/c) sum_n C(m,n,c) I(m,n,c), including n <= 0.
inline PoissonReport poisson_check(std::int64_t m, std::int64_t c, double N, double t, double tol) {
  if (m < 1) throw std::invalid_argument("poisson_check: m must be >= 1");
  if (c < 1 || c > 50) throw std::invalid_argument("poisson_check: need 1 <= c <= 50");
  if (!(N >= 1 && N <= 1e5)) throw std::invalid_argument("poisson_check: need 1 <= N <= 1e5");
  if (!(t >= 0 && t <= 2000)) throw std::invalid_argument("poisson_check: need 0 <= t <= 2000");
  const auto& W = pipeline_weight();
  PoissonReport r;
  r.m = m;
  r.c = c;
  r.N = N;
  r.t = t;
  r.nominal_cutoff = static_cast<double>(c) * t / N;

  const RootTable roots(c);
  CompensatedSum direct;
  for (auto n = static_cast<std::int64_t>(std::floor(W.a * N)); n <= static_cast<std::int64_t>(std::ceil(W.b * N)); ++n) {
    if (n < 1) continue;
    const double w = W(static_cast<double>(n) / N);
    if (w == 0.0) continue;
    const double S = kloosterman(n, m, c, roots).real();
    const double ln = std::log(static_cast<double>(n));
    direct += S * w * std::polar(1.0, t * ln) * e(std::sqrt(static_cast<double>(n * m)) / static_cast<double>(c));
    r.trivial_bound += std::abs(S) * w;
  }
  r.direct = direct.value();
  if (!(r.trivial_bound > 0)) throw std::domain_error("poisson_check: direct side vanishes identically");

  const cplx pref = N * std::polar(1.0, t * std::log(N)) / static_cast<double>(c);
  CompensatedSum dual;
  double qerr = 0.0, floor = 0.0;
  const double cut8 = 8.0 * r.nominal_cutoff;
  // Live window: the stationary range of the phase, n in [(c/2piN) min h', (c/2piN) max h'].
  const double md = static_cast<double>(m), cd = static_cast<double>(c);
  const double live_hi = cd / (kTwoPi * N) * (t + kPi * std::sqrt(md * N) / cd);
  auto term = [&](std::int64_t n) -> std::optional<cplx> {
    const auto cs = charsum_grid(m, n, c);
    if (!cs.closed_form) return std::nullopt;  // gcd(n, c) > 1: the character sum is 0
    const auto I = i_value(md, n, c, N, t);
    qerr += std::abs(pref) * cd * I.abs_error;
    floor = std::abs(pref) * cd * std::max(kInnerTol, I.abs_error);
    return pref * *cs.closed_form * I.value;
  };
  auto walk = [&](std::int64_t start, std::int64_t dir, double live_edge) {
    int quiet = 0;
    std::int64_t last = start;
    for (std::int64_t n = start;; n += dir) {
      const auto v = term(n);
      last = n;
      if (!v) continue;
      ++r.dual_terms;
      dual += *v;
      const double mag = std::abs(*v);
      if (static_cast<double>(n) > cut8) r.tail_beyond += mag;
      if (n <= 0) r.nonpositive += mag;
      const bool past = dir > 0 ? static_cast<double>(n) > live_edge : true;
      quiet = (past && mag <= 4 * floor) ? quiet + 1 : 0;
      if (quiet >= 4) break;
      if (std::abs(n) > 100000) throw std::runtime_error("poisson_check: dual sum does not terminate");
    }
    return last;
  };
  r.n_hi = walk(1, +1, std::max(live_hi, cut8));
  r.n_lo = walk(0, -1, 0.0);
  r.dual = dual.value();
  r.relative_gap = std::abs(r.direct - r.dual) / r.trivial_bound;
  r.quadrature_error = qerr / r.trivial_bound;
  r.tail_beyond /= r.trivial_bound;
  r.nonpositive /= r.trivial_bound;
  r.verdict = verdict_of(r.relative_gap <= tol);
  return r;
}

inline PoissonReport poisson_check(std::int64_t m, std::int64_t c, const PipelineParams& p, double tol) {
  p.validate();
  return poisson_check(m, c, p.N, p.t, tol);
}

// ---------------------------------------------------------------- J(m)

namespace detail {

/// Composite GL32 + GL16 nodes on the support of U, with panels short enough for
/// the given phase rate (radians per unit v).
struct OuterGrid {
  std::vector<double> v, w32, w16;

  OuterGrid(double a, double b, double rate) {
    const auto panels = static_cast<std::size_t>(std::max(4.0, std::ceil(rate * (b - a) / kPanelPhase)));
    const auto& g32 = gl32();
    const auto& g16 = gl16();
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * width, half = 0.5 * width;
      for (std::size_t k = 0; k < g32.x.size(); ++k) {
        v.push_back(mid + half * g32.x[k]);
        w32.push_back(half * g32.w[k]);
        w16.push_back(0.0);
      }
      for (std::size_t k = 0; k < g16.x.size(); ++k) {
        v.push_back(mid + half * g16.x[k]);
        w32.push_back(0.0);
        w16.push_back(half * g16.w[k]);
      }
    }
  }
  std::size_t panels() const { return v.size() / 48; }
};

/// I(v Ntilde, n, c) at each outer node, with its quadrature error.
struct IProfile {
  std::vector<cplx> value;
  std::vector<double> error;
};

inline IProfile i_profile(std::int64_t n, std::int64_t c, const PipelineParams& p, const OuterGrid& g) {
  IProfile prof;
  prof.value.reserve(g.v.size());
  prof.error.reserve(g.v.size());
  const auto& W = pipeline_weight();
  const double cd = static_cast<double>(c), b = kTwoPi * static_cast<double>(n) * p.N / cd;
  for (double v : g.v) {
    const double a = kTwoPi * std::sqrt(v * p.ntilde() * p.N) / cd;
    const auto phase = [&](double y) { return p.t * std::log(y) + a * std::sqrt(y) - b * y; };
    const auto rate = [&](double y) { return std::abs(p.t / y + 0.5 * a / std::sqrt(y) - b); };
    const auto br = rate_breaks(rate, W.a, W.b, kPanelPhase);
    const double top = p.t * std::log(2.0) + a * std::sqrt(2.0) + 2 * std::abs(b);
    const auto o = integrate([&](double y) { return W(y) * std::polar(1.0, phase(y)); }, br, kInnerTol,
                             kDefaultNodeBudget, phase_noise(top, 1.0));
    prof.value.push_back(o.value);
    prof.error.push_back(o.abs_error);
  }
  return prof;
}

/// Largest |d/dv| of the stationary phase of I(v Ntilde, n, c), in radians.
inline double i_profile_rate(std::int64_t c, const PipelineParams& p) {
  return kPi * std::sqrt(2.0 * p.ntilde() * p.N) / static_cast<double>(c);
}

}  // namespace detail

struct JTuple {
  std::int64_t n1 = 1, n2 = 1, c1 = 1, c2 = 1;
};

/// J(m) = int I(v Ntilde, n1, c1) conj(I(v Ntilde, n2, c2)) U(v) e(-m Ntilde v / (c1 c2)) dv
/// for every m in ms, from one shared table of inner integrals.
inline std::vector<ComplexEstimate> j_values(const std::vector<std::int64_t>& ms, const JTuple& q, const PipelineParams& p) {
  p.validate();
  if (q.c1 < 1 || q.c2 < 1) throw std::invalid_argument("j_integral: moduli must be >= 1");
  if (ms.empty()) return {};
  const double kappa = p.ntilde() / static_cast<double>(q.c1 * q.c2);
  std::int64_t mmax = 0;
  for (auto m : ms) mmax = std::max(mmax, std::abs(m));
  const double rate = kTwoPi * kappa * static_cast<double>(mmax) + detail::i_profile_rate(q.c1, p) + detail::i_profile_rate(q.c2, p);
  const auto& U = pipeline_weight();
  const detail::OuterGrid g(U.a, U.b, rate);
  const auto I1 = detail::i_profile(q.n1, q.c1, p, g);
  const auto I2 = (q.n1 == q.n2 && q.c1 == q.c2) ? I1 : detail::i_profile(q.n2, q.c2, p, g);
  std::vector<cplx> F(g.v.size());
  double inner = 0.0;
  for (std::size_t i = 0; i < g.v.size(); ++i) {
    const double u = U(g.v[i]);
    F[i] = I1.value[i] * std::conj(I2.value[i]) * u;
    inner += g.w32[i] * u * (std::abs(I1.value[i]) * I2.error[i] + std::abs(I2.value[i]) * I1.error[i] + I1.error[i] * I2.error[i]);
  }
  std::vector<ComplexEstimate> out;
  for (auto m : ms) {
    CompensatedSum s32, s16;
    double l1 = 0.0;
    for (std::size_t i = 0; i < g.v.size(); ++i) {
      const cplx z = F[i] * e(-kappa * static_cast<double>(m) * g.v[i]);
      if (g.w32[i] != 0.0) {
        s32 += g.w32[i] * z;
        l1 += g.w32[i] * std::abs(z);
      } else {
        s16 += g.w16[i] * z;
      }
    }
    const cplx j = s32.value();
    out.push_back({j, std::abs(j - s16.value()) + inner + 16 * detail::kEps * l1, Method::quadrature});
  }
  return out;
}

inline ComplexEstimate j_integral(std::int64_t m, std::int64_t n1, std::int64_t n2, std::int64_t c1, std::int64_t c2,
                                  const PipelineParams& p) {
  return j_values({m}, {n1, n2, c1, c2}, p).front();
}

struct JDecayReport {
  JTuple tuple;
  std::vector<std::int64_t> ms;
  std::vector<ComplexEstimate> values;
  double A0 = 0.0;              // |J(0)| t
  double A1 = 0.0;              // max |J(m)| t K over 0 < |m| <= N / K^2
  double far_ratio = 0.0;       // max |J(m)| / |J(0)| over m >= 16 N / K^2
  double near_ratio = 0.0;      // same over m >= 8 N / K^2
  bool octave_trend = true;     // octave maxima beyond 2N/K^2 do not grow (above the noise)
  double local_violation = 1.0; // largest ratio |J(m_next)| / |J(m)| among resolved samples beyond 2N/K^2
  Verdict verdict = Verdict::fail;
};

/// m samples: 0, 1, 2, 3, powers of two through N/K^2, then octaves from 2N/K^2 to 32N/K^2.
inline std::vector<std::int64_t> j_decay_ladder(const PipelineParams& p) {
  const auto base = std::max<std::int64_t>(1, std::llround(p.N / (p.K * p.K)));
  std::vector<std::int64_t> ms{0, 1, 2, 3};
  for (std::int64_t m = 4; m <= base; m *= 2) ms.push_back(m);
  if (ms.back() != base) ms.push_back(base);
  for (std::int64_t k = 2; k <= 32; k *= 2) {
    ms.push_back(k * base);
    ms.push_back(k * base + k * base / 2);
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return ms;
}

inline JDecayReport j_decay_check(const JTuple& q, const PipelineParams& p) {
  JDecayReport r;
  r.tuple = q;
  r.ms = j_decay_ladder(p);
  r.values = j_values(r.ms, q, p);
  const double base = p.N / (p.K * p.K);
  const double j0 = std::abs(r.values[0].value);
  r.A0 = j0 * p.t;
  std::map<int, double> octave;  // floor(log2(m / (2 base))) -> max resolved |J|
  double prev = -1.0;
  for (std::size_t i = 1; i < r.ms.size(); ++i) {
    const double m = static_cast<double>(r.ms[i]);
    const double mag = std::abs(r.values[i].value);
    if (m <= base) r.A1 = std::max(r.A1, mag * p.t * p.K);
    if (m >= 16 * base) r.far_ratio = std::max(r.far_ratio, mag / j0);
    if (m >= 8 * base) r.near_ratio = std::max(r.near_ratio, mag / j0);
    if (m >= 2 * base) {
      const bool resolved = mag > 10 * r.values[i].abs_error;
      const int oct = static_cast<int>(std::floor(std::log2(m / (2 * base)) + 1e-12));
      const double level = resolved ? mag : 0.0;
      octave[oct] = std::max(octave[oct], level);
      if (resolved && prev > 0) r.local_violation = std::max(r.local_violation, mag / prev);
      prev = resolved ? mag : -1.0;
    }
  }
  double last = std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : octave) {
    if (v > last) r.octave_trend = false;
    last = v;
  }
  r.verdict = verdict_of(r.A0 <= 100 && r.A1 <= 100 && r.far_ratio <= 1e-6 && r.near_ratio <= 1e-6 && r.octave_trend);
  return r;
}

// ---------------------------------------------------------------- off-diagonal assembly

struct AssemblyGrid {
  int c_count = 12;  // sampled moduli in [Q, 2Q]
  int n_count = 20;  // dual indices per modulus for the congruence count
  int m_count = 30;  // m values spread over |m| <= N / K^2
};

struct AssemblyReport {
  std::vector<std::int64_t> moduli;
  std::vector<std::int64_t> m_window;
  std::size_t live_pairs = 0;          // (n, c) with a stationary point, carrying J
  double diagonal = 0.0;               // extrapolated diagonal part
  double diagonal_scale = 0.0;         // Ntilde / N
  double diagonal_ratio = 0.0;
  double offdiag_as_written = 0.0;     // with the displayed 1/(c1 c2)^2
  double offdiag_single = 0.0;         // with a single 1/(c1 c2)
  double offdiag_scale = 0.0;          // Ntilde t / (N K^3)
  double offdiag_ratio = 0.0;          // as written
  double offdiag_single_ratio = 0.0;
  std::size_t indicator_hits = 0;
  double indicator_predicted = 0.0;    // sum over tuples of window / (c1 c2)
  double sparsity_ratio = 0.0;         // hits / predicted
  std::size_t offdiag_terms = 0;
  Verdict verdict = Verdict::fail;
};

inline AssemblyReport offdiagonal_assembly(const PipelineParams& p, const AssemblyGrid& grid = {}) {
  p.validate();
  if (grid.c_count < 4 || grid.n_count < 4 || grid.m_count < 4)
    throw std::invalid_argument("offdiagonal_assembly: grid too small to fit constants (need >= 4 per axis)");
  if (grid.c_count > 12 || grid.n_count > 20 || grid.m_count > 30)
    throw std::invalid_argument("offdiagonal_assembly: grid exceeds desk scale (c 12, n 20, m 30)");
  AssemblyReport r;
  const auto qlo = static_cast<std::int64_t>(std::ceil(p.Q)), qhi = static_cast<std::int64_t>(std::floor(2 * p.Q));
  const std::int64_t c_total = qhi - qlo + 1;
  for (int i = 0; i < grid.c_count; ++i) {
    const auto c = qlo + static_cast<std::int64_t>(std::llround(static_cast<double>(i) * static_cast<double>(c_total - 1) / (grid.c_count - 1)));
    if (r.moduli.empty() || r.moduli.back() != c) r.moduli.push_back(c);
  }
  const double c_scale = static_cast<double>(c_total) / static_cast<double>(r.moduli.size());
  // m window: m_count values spread evenly over |m| <= N / K^2
  const auto M = static_cast<std::int64_t>(std::ceil(p.N / (p.K * p.K)));
  std::vector<std::int64_t> window;
  for (int i = 0; i < grid.m_count; ++i) {
    const auto m = -M + static_cast<std::int64_t>(std::llround(2.0 * static_cast<double>(M) * i / (grid.m_count - 1)));
    if (window.empty() || window.back() != m) window.push_back(m);
  }
  r.m_window = window;
  const auto in_window = [&](std::int64_t L, std::int64_t res) {
    std::vector<std::int64_t> ms;
    for (auto m : window)
      if (mod(m, L) == res) ms.push_back(m);
    return ms;
  };

  // congruence sparsity over all coprime (n_i <= n_count) tuples, exact diagonal excluded
  for (auto c1 : r.moduli)
    for (auto c2 : r.moduli)
      for (std::int64_t n1 = 1; n1 <= grid.n_count; ++n1) {
        if (gcd(n1, c1) != 1) continue;
        for (std::int64_t n2 = 1; n2 <= grid.n_count; ++n2) {
          if (gcd(n2, c2) != 1 || (c1 == c2 && n1 == n2)) continue;
          const std::int64_t L = c1 * c2;
          r.indicator_hits += in_window(L, congruence_residue(n1, n2, c1, c2)).size();
          r.indicator_predicted += static_cast<double>(window.size()) / static_cast<double>(L);
        }
      }
  r.sparsity_ratio = r.indicator_predicted > 0 ? static_cast<double>(r.indicator_hits) / r.indicator_predicted : 0.0;

  // live dual indices: the stationary window of I(v Ntilde, n, c) over y, v in [1, 2], widened by one
  std::vector<std::pair<std::int64_t, std::int64_t>> live;  // (n, c)
  for (auto c : r.moduli) {
    const double cd = static_cast<double>(c);
    const double lo = cd / (kTwoPi * p.N) * (p.t / 2 + kPi * std::sqrt(p.ntilde() * p.N) / (cd * std::sqrt(2.0)));
    const double hi = cd / (kTwoPi * p.N) * (p.t + kPi * std::sqrt(2.0 * p.ntilde() * p.N) / cd);
    for (auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(lo)) - 1);
         n <= std::min<std::int64_t>(grid.n_count, static_cast<std::int64_t>(std::ceil(hi)) + 1); ++n)
      if (gcd(n, c) == 1) live.emplace_back(n, c);
  }
  r.live_pairs = live.size();

  const double m_scale = static_cast<double>(2 * M + 1) / static_cast<double>(window.size());
  double diag = 0.0, nd_written = 0.0, nd_single = 0.0;
  for (const auto& [n1, c1] : live)
    for (const auto& [n2, c2] : live) {
      const double L = static_cast<double>(c1 * c2);
      if (c1 == c2 && n1 == n2) {
        diag += std::abs(j_integral(0, n1, n1, c1, c1, p).value) / L;
        continue;
      }
      const auto ms = in_window(c1 * c2, congruence_residue(n1, n2, c1, c2));
      if (ms.empty()) continue;
      for (const auto& j : j_values(ms, {n1, n2, c1, c2}, p)) {
        nd_single += std::abs(j.value) / L;
        nd_written += std::abs(j.value) / (L * L);
        ++r.offdiag_terms;
      }
    }
  const double Nt = p.ntilde();
  r.diagonal = Nt * c_scale * diag;
  r.diagonal_scale = Nt / p.N;
  r.diagonal_ratio = r.diagonal / r.diagonal_scale;
  r.offdiag_as_written = Nt * c_scale * c_scale * m_scale * nd_written;
  r.offdiag_single = Nt * c_scale * c_scale * m_scale * nd_single;
  r.offdiag_scale = Nt * p.t / (p.N * p.K * p.K * p.K);
  r.offdiag_ratio = r.offdiag_as_written / r.offdiag_scale;
  r.offdiag_single_ratio = r.offdiag_single / r.offdiag_scale;
  const bool sparse_ok = r.sparsity_ratio >= 1.0 / 3.0 && r.sparsity_ratio <= 3.0;
  r.verdict = verdict_of(r.diagonal_ratio <= 100 && r.offdiag_ratio <= 100 && sparse_ok);
  return r;
}

}  // namespace weylcheck
