#pragma once

// Oscillatory integrals: an adaptive Gauss-Legendre oracle, stationary phase
// with finite-difference corrections, nonstationary decay ladders, the
// second-derivative test, and the Bessel-weighted k-sum S1.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylcheck/core.hpp"
#include "weylcheck/report.hpp"
#include "weylcheck/special.hpp"

namespace weylcheck {

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved) : std::runtime_error(what), achieved_bound(achieved) {}
  double achieved_bound;
};

class NoStationaryPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------- weights

struct SmoothWeight {
  std::function<double(double)> evaluator;
  double a = 0.0, b = 1.0;
  double X = 1.0, V = 1.0;

  double operator()(double t) const { return (t > a && t < b) ? evaluator(t) : 0.0; }
};

/// exp(1 - 1/(1 - u^2)) on (-1, 1): peak value 1 at u = 0.
inline double bump_profile(double u) {
  const double s = 1.0 - u * u;
  return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
}

/// Smooth monotone transition: 0 for s <= 0, 1 for s >= 1.
inline double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double p = std::exp(-1.0 / s), q = std::exp(-1.0 / (1.0 - s));
  return p / (p + q);
}

inline SmoothWeight bump(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("bump: need a < b");
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  return {[mid, half](double t) { return bump_profile((t - mid) / half); }, a, b, 1.0, half};
}

/// Support [a, b], identically 1 on [c, d].
inline SmoothWeight plateau_bump(double a, double c, double d, double b) {
  if (!(a < c && c <= d && d < b)) throw std::invalid_argument("plateau_bump: need a < c <= d < b");
  return {[=](double t) { return smooth_step((t - a) / (c - a)) * smooth_step((b - t) / (b - d)); }, a, b, 1.0,
          std::min(c - a, b - d)};
}

/// Constant on [a, b]; not smooth at the endpoints, for the second-derivative test only.
inline SmoothWeight constant_weight(double a, double b, double value) {
  return {[value](double) { return value; }, a, b, std::abs(value), b - a};
}

struct EndpointReport {
  double max_derivative = 0.0;  // over orders 0..4 at both endpoints
  bool ok = false;
};

inline EndpointReport check_weight_endpoints(const SmoothWeight& w, double tol = 1e-8) {
  const double h = 1e-3 * (w.b - w.a);
  EndpointReport r;
  for (double t0 : {w.a, w.b}) {
    std::array<double, 5> f{};
    for (int k = 0; k < 5; ++k) f[static_cast<std::size_t>(k)] = w(t0 + (k - 2) * h);
    const std::array<double, 5> d{f[2], (f[3] - f[1]) / (2 * h), (f[3] - 2 * f[2] + f[1]) / (h * h),
                                  (f[4] - 2 * f[3] + 2 * f[1] - f[0]) / (2 * h * h * h),
                                  (f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]) / (h * h * h * h)};
    for (double v : d) r.max_derivative = std::max(r.max_derivative, std::abs(v));
  }
  r.ok = r.max_derivative <= tol;
  return r;
}

// ---------------------------------------------------------------- phases

struct PhaseSpec {
  std::function<double(double)> h;
  std::function<double(double)> d1;  // optional
  std::function<double(double)> d2;  // optional
  double Y = 1.0, Q = 1.0;
  std::optional<double> R;

  double operator()(double t) const { return h(t); }
  double first(double t) const {
    if (d1) return d1(t);
    const double s = 1e-5 * Q;
    return (h(t + s) - h(t - s)) / (2 * s);
  }
  double second(double t) const {
    if (d2) return d2(t);
    if (d1) {
      const double s = 1e-5 * Q;
      return (d1(t + s) - d1(t - s)) / (2 * s);
    }
    const double s = 1e-4 * Q;
    return (h(t + s) - 2 * h(t) + h(t - s)) / (s * s);
  }
};

/// Scales the phase by lambda, keeping the metadata consistent.
inline PhaseSpec scaled(const PhaseSpec& p, double lambda) {
  PhaseSpec out;
  out.h = [f = p.h, lambda](double t) { return lambda * f(t); };
  if (p.d1) out.d1 = [f = p.d1, lambda](double t) { return lambda * f(t); };
  if (p.d2) out.d2 = [f = p.d2, lambda](double t) { return lambda * f(t); };
  out.Y = std::abs(lambda) * p.Y;
  out.Q = p.Q;
  if (p.R) out.R = std::abs(lambda) * *p.R;
  return out;
}

struct PhaseScaleReport {
  std::array<double, 3> max_ratio{};  // max |h^(j)| / (Y Q^-j), j = 1..3
  double min_second_ratio = 0.0;      // min |h''| / (Y Q^-2)
};

inline PhaseScaleReport check_phase_scales(const PhaseSpec& p, double a, double b) {
  PhaseScaleReport r;
  r.min_second_ratio = std::numeric_limits<double>::infinity();
  const double s = 1e-3 * (b - a);
  for (int i = 0; i < 32; ++i) {
    const double t = a + (b - a) * (i + 0.5) / 32;
    const double d1 = p.first(t), d2 = p.second(t);
    const double d3 = (p.second(t + s) - p.second(t - s)) / (2 * s);
    r.max_ratio[0] = std::max(r.max_ratio[0], std::abs(d1) / (p.Y / p.Q));
    r.max_ratio[1] = std::max(r.max_ratio[1], std::abs(d2) / (p.Y / (p.Q * p.Q)));
    r.max_ratio[2] = std::max(r.max_ratio[2], std::abs(d3) / (p.Y / (p.Q * p.Q * p.Q)));
    r.min_second_ratio = std::min(r.min_second_ratio, std::abs(d2) / (p.Y / (p.Q * p.Q)));
  }
  return r;
}

// ---------------------------------------------------------------- quadrature core

namespace detail {

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

inline GaussRule gauss_legendre(int n) {
  GaussRule g{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-17) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    g.x[lo] = -z;
    g.x[hi] = z;
    g.w[lo] = g.w[hi] = wt;
  }
  return g;
}

inline const GaussRule& gl16() {
  static const GaussRule g = gauss_legendre(16);
  return g;
}
inline const GaussRule& gl32() {
  static const GaussRule g = gauss_legendre(32);
  return g;
}

struct QuadratureOutcome {
  cplx value;
  double abs_error = 0.0;
  std::size_t nodes = 0;
  std::size_t panels = 0;
};

inline constexpr std::size_t kDefaultNodeBudget = 200'000'000;

/// Adaptive GL32/GL16 over the given breakpoints. Each panel is bisected until
/// |GL32 - GL16| is below its share of tol or at the rounding level of the panel,
/// measured against the largest integrand value seen so far.
template <class F>
QuadratureOutcome integrate(F&& f, const std::vector<double>& breaks, double tol,
                            std::size_t budget = kDefaultNodeBudget, double point_noise = 0.0) {
  const auto& g32 = gl32();
  const auto& g16 = gl16();
  const double total = breaks.back() - breaks.front();
  QuadratureOutcome out;
  CompensatedSum sum;
  double err = 0.0, l1 = 0.0, fmax = 0.0;
  struct Panel {
    double a, b;
    int depth;
  };
  std::vector<Panel> stack;
  for (std::size_t i = breaks.size() - 1; i-- > 0;)
    if (breaks[i + 1] > breaks[i]) stack.push_back({breaks[i], breaks[i + 1], 0});
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b), half = 0.5 * (p.b - p.a);
    cplx i32{}, i16{};
    double abs32 = 0.0;
    for (std::size_t k = 0; k < g32.x.size(); ++k) {
      const cplx v = f(mid + half * g32.x[k]);
      i32 += g32.w[k] * v;
      abs32 += g32.w[k] * std::abs(v);
      fmax = std::max(fmax, std::abs(v));
    }
    for (std::size_t k = 0; k < g16.x.size(); ++k) i16 += g16.w[k] * f(mid + half * g16.x[k]);
    i32 *= half;
    i16 *= half;
    abs32 *= half;
    out.nodes += 48;
    const double e = std::abs(i32 - i16);
    const double share = tol * (p.b - p.a) / total;
    // Panels whose disagreement is at the evaluation noise of the integrand are final.
    const double noise = 64 * kEps * (abs32 + (p.b - p.a) * fmax) + 4 * (p.b - p.a) * point_noise;
    if (e <= share || e <= noise || p.depth >= 60) {
      sum += i32;
      err += e;
      l1 += abs32;
      ++out.panels;
    } else {
      stack.push_back({mid, p.b, p.depth + 1});
      stack.push_back({p.a, mid, p.depth + 1});
    }
    if (out.nodes > budget) {
      double pending = 0.0;
      for (const auto& q : stack) pending += q.b - q.a;
      throw QuadratureError("quadrature: node budget exhausted with " + std::to_string(pending / total) +
                                " of the interval unresolved",
                            err + std::abs(sum.value()) * pending / total);
    }
  }
  out.value = sum.value();
  out.abs_error = err + 4 * kEps * l1;
  return out;
}

/// Breakpoints on [a, b] so that each panel carries at most max_phase radians of
/// sampled variation of h.
template <class H>
std::vector<double> phase_breaks(H&& h, double a, double b, double max_phase, int samples = 4096) {
  std::vector<double> br{a};
  double acc = 0.0;
  double prev = h(a);
  for (int i = 1; i <= samples; ++i) {
    const double t0 = a + (b - a) * (i - 1) / samples;
    const double t1 = (i == samples) ? b : a + (b - a) * i / samples;
    const double cur = h(t1);
    const double d = std::abs(cur - prev);
    prev = cur;
    if (d > max_phase) {
      if (br.back() < t0) br.push_back(t0);
      const int pieces = static_cast<int>(std::ceil(d / max_phase));
      for (int k = 1; k < pieces; ++k) br.push_back(t0 + (t1 - t0) * k / pieces);
      br.push_back(t1);
      acc = 0.0;
      continue;
    }
    acc += d;
    if (acc > max_phase) {
      br.push_back(t0);
      acc = d;
    }
  }
  if (br.back() < b) br.push_back(b);
  return br;
}

/// Breakpoints from a bound on the local phase rate |h'(t)|.
template <class Rate>
std::vector<double> rate_breaks(Rate&& rate, double a, double b, double max_phase) {
  std::vector<double> br{a};
  double t = a;
  while (t < b) {
    double step = max_phase / std::max(rate(t), 1e-300);
    step = max_phase / std::max({rate(t), rate(std::min(b, t + step)), 1e-300});
    step = std::min(step, b - a);
    t = std::min(b, t + step);
    br.push_back(t);
  }
  return br;
}

inline constexpr double kPanelPhase = 16.0;

inline double sampled_variation(const std::function<double(double)>& h, double a, double b, int samples = 4096,
                                double* max_abs = nullptr) {
  double v = 0.0, prev = h(a), top = std::abs(prev);
  for (int i = 1; i <= samples; ++i) {
    const double cur = h(a + (b - a) * i / samples);
    v += std::abs(cur - prev);
    top = std::max(top, std::abs(cur));
    prev = cur;
  }
  if (max_abs) *max_abs = top;
  return v;
}

/// Absolute rounding level of w e^{ih} at a point: the phase is known to eps |h|.
inline double phase_noise(double max_phase, double amplitude) { return 2 * kEps * max_phase * amplitude; }

}  // namespace detail

/// int w(t) exp(i h(t)) dt over the support of w, to absolute accuracy tol.
inline ComplexEstimate oscillatory_quadrature(const SmoothWeight& w, const PhaseSpec& h, double tol,
                                              std::size_t budget = detail::kDefaultNodeBudget) {
  if (!(tol >= 1e-12)) throw std::invalid_argument("oscillatory_quadrature: tol must be >= 1e-12");
  double hmax = 0.0;
  if (detail::sampled_variation(h.h, w.a, w.b, 4096, &hmax) > 1e7)
    throw std::invalid_argument("oscillatory_quadrature: phase variation exceeds 1e7 radians");
  const auto br = detail::phase_breaks(h.h, w.a, w.b, detail::kPanelPhase);
  const auto o = detail::integrate([&](double t) { return w(t) * std::polar(1.0, h(t)); }, br, tol, budget,
                                   detail::phase_noise(hmax, w.X));
  if (o.abs_error > tol)
    throw QuadratureError("oscillatory_quadrature: achieved bound " + std::to_string(o.abs_error) + " exceeds tol",
                          o.abs_error);
  return {o.value, o.abs_error, Method::quadrature};
}

// ---------------------------------------------------------------- stationary phase

struct StationaryPhaseResult {
  ComplexEstimate estimate;
  double t0 = 0.0;
  double h2 = 0.0;           // h''(t0)
  std::vector<cplx> terms;   // e^{i h(t0)} p_n / sqrt(h''), n = 0..order
  cplx first_omitted{};      // same normalization, n = order + 1
  double size_ratio = 0.0;   // Q^2 / (V^2 Y): small in the lemma's regime
  bool size_conditions = false;
};

namespace detail {

/// Central binomial finite difference of order m (m even) at t with step s.
template <class G>
cplx central_derivative(G&& g, double t, int m, double s) {
  cplx acc{};
  double binom = 1.0;
  for (int k = 0; k <= m; ++k) {
    const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom * g(t + (k - m / 2) * s);
    binom = binom * (m - k) / (k + 1);
  }
  return acc / std::pow(s, m);
}

inline double locate_stationary_point(const PhaseSpec& h, double a, double b) {
  constexpr int grid = 2048;
  std::vector<double> ts(grid + 1), ds(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    ts[static_cast<std::size_t>(i)] = a + (b - a) * (i + 0.5) / (grid + 1);
    ds[static_cast<std::size_t>(i)] = h.first(ts[static_cast<std::size_t>(i)]);
  }
  int changes = 0;
  std::size_t at = 0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    if ((ds[i] < 0) != (ds[i + 1] < 0)) {
      ++changes;
      at = i;
    }
  if (changes == 0)
    throw NoStationaryPoint("stationary_phase_eval: no stationary point in the support; use nonstationary_decay_check");
  if (changes > 1)
    throw std::domain_error("stationary_phase_eval: " + std::to_string(changes) + " sign changes of h'");
  double lo = ts[at], hi = ts[at + 1];
  const bool lo_neg = ds[at] < 0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double m = 0.5 * (lo + hi);
    if ((h.first(m) < 0) == lo_neg)
      lo = m;
    else
      hi = m;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double step = h.first(t) / h.second(t);
    if (!std::isfinite(step) || std::abs(step) > hi - lo + 1e-12) break;
    t -= step;
  }
  return t;
}

}  // namespace detail

/// Stationary-phase expansion of int w e^{ih}, terms n = 0..order (order <= 2).
inline StationaryPhaseResult stationary_phase_eval(const SmoothWeight& w, const PhaseSpec& h, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("stationary_phase_eval: order must be in [0, 2]");
  StationaryPhaseResult r;
  r.t0 = detail::locate_stationary_point(h, w.a, w.b);
  const double t0 = r.t0;
  const double h0 = h(t0);
  r.h2 = h.second(t0);
  const double h2 = r.h2;
  const cplx root = std::sqrt(cplx(h2, 0.0));
  const cplx lead = std::sqrt(kTwoPi) * std::polar(1.0, kPi / 4) * std::polar(1.0, h0) / root;
  auto G = [&](double t) {
    const double dt = t - t0;
    return w(t) * std::polar(1.0, h(t) - h0 - 0.5 * h2 * dt * dt);
  };
  const double scale = std::min(w.V, h.Q);
  double fact = 1.0;
  cplx pw{1.0, 0.0};
  const cplx step_factor = cplx(0.0, 1.0) / (2.0 * h2);
  for (int n = 0; n <= order + 1; ++n) {
    if (n > 0) {
      fact *= n;
      pw *= step_factor;
    }
    cplx gder;
    if (n == 0) {
      gder = w(t0);
    } else {
      const double s = std::pow(detail::kEps, 1.0 / (2 * n + 2)) * scale;
      gder = detail::central_derivative(G, t0, 2 * n, s);
    }
    const cplx term = lead * pw * gder / fact;
    if (n <= order)
      r.terms.push_back(term);
    else
      r.first_omitted = term;
  }
  CompensatedSum s;
  for (const auto& t : r.terms) s += t;
  r.estimate = {s.value(), std::abs(r.first_omitted), Method::asymptotic};
  r.size_ratio = h.Q * h.Q / (w.V * w.V * h.Y);
  const double Z = h.Q + w.X + h.Y + w.V + 1.0;
  constexpr double delta = 0.1;
  r.size_conditions = h.Y >= std::pow(Z, 3 * delta) && w.V >= h.Q * std::pow(Z, delta / 2) / std::sqrt(h.Y);
  return r;
}

// ---------------------------------------------------------------- nonstationary decay

struct DecayRung {
  double R;
  double magnitude;
  double abs_error;
  bool in_regime;
  bool resolved;  // magnitude above the quadrature floor
};

struct DecayReport {
  std::vector<DecayRung> rungs;
  std::optional<double> fitted_exponent;  // slope of log|I| against log R over resolved in-regime rungs
  Verdict verdict = Verdict::inconclusive;
};

/// Scales h so that its derivative lower bound runs through the ladder and checks
/// that |I| falls at least like R^-3 across in-regime rungs.
inline DecayReport nonstationary_decay_check(const SmoothWeight& w, const PhaseSpec& h,
                                             const std::vector<double>& ladder = {1e1, 1e2, 1e3, 1e4}) {
  if (!h.R || !(*h.R > 0)) throw std::invalid_argument("nonstationary_decay_check: phase needs R > 0");
  for (int i = 0; i <= 512; ++i) {
    const double t = w.a + (w.b - w.a) * i / 512;
    if (std::abs(h.first(t)) < 0.99 * *h.R)
      throw std::domain_error("nonstationary_decay_check: |h'| drops below R at t = " + std::to_string(t));
  }
  double mass = 0.0;
  for (int i = 0; i < 256; ++i) mass += std::abs(w(w.a + (w.b - w.a) * (i + 0.5) / 256)) * (w.b - w.a) / 256;
  const double tol = 1e-12 * std::max(1.0, mass);
  DecayReport rep;
  for (double R : ladder) {
    const PhaseSpec s = scaled(h, R / *h.R);
    const auto q = oscillatory_quadrature(w, s, tol);
    const double thr = 10.0 * std::max(std::sqrt(s.Y) / s.Q, 1.0 / w.V);
    const double m = std::abs(q.value);
    rep.rungs.push_back({R, m, q.abs_error, R >= thr, m > 10 * (q.abs_error + tol)});
  }
  std::vector<const DecayRung*> live;
  for (const auto& r : rep.rungs)
    if (r.in_regime) live.push_back(&r);
  if (live.size() < 2) return rep;
  bool ok = true;
  for (std::size_t i = 0; i + 1 < live.size(); ++i) {
    const auto& p = *live[i];
    const auto& n = *live[i + 1];
    if (!n.resolved) continue;
    if (n.magnitude > p.magnitude * std::pow(p.R / n.R, 3.0) * (1 + 1e-9)) ok = false;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto* r : live)
    if (r->resolved) {
      const double x = std::log(r->R), y = std::log(r->magnitude);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
  if (cnt >= 2) rep.fitted_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  rep.verdict = verdict_of(ok);
  return rep;
}

// ---------------------------------------------------------------- second-derivative test

struct SecondDerivativeReport {
  cplx integral;
  double abs_error = 0.0;
  double r = 0.0;  // min |f''|
  double M = 0.0;  // max |g|
  double bound = 0.0;
  bool g_over_fprime_monotone = false;
  Verdict verdict = Verdict::fail;
};

/// int g e(f) over the support of g, against 8M / sqrt(r). f is a phase in cycles.
inline SecondDerivativeReport second_derivative_bound_check(const SmoothWeight& g, const PhaseSpec& f) {
  constexpr int grid = 512;
  SecondDerivativeReport rep;
  rep.r = std::numeric_limits<double>::infinity();
  int sign = 0;
  std::vector<double> ratio;
  for (int i = 0; i <= grid; ++i) {
    const double t = g.a + (g.b - g.a) * i / grid;
    const double s2 = f.second(t);
    const int sg = s2 > 0 ? 1 : (s2 < 0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign))
      throw std::domain_error("second_derivative_bound_check: f'' changes sign or vanishes");
    sign = sg;
    rep.r = std::min(rep.r, std::abs(s2));
    const double gv = (i == 0 || i == grid) ? g.evaluator(t) : g(t);
    rep.M = std::max(rep.M, std::abs(gv));
    ratio.push_back(gv / f.first(t));
  }
  // f' is monotone, so g/f' can only be split at the zero of f'.
  auto monotone = [](const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    bool up = true, down = true;
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      if (!std::isfinite(v[i]) || !std::isfinite(v[i + 1])) continue;
      const double tolv = 1e-12 * (std::abs(v[i]) + std::abs(v[i + 1]));
      if (v[i + 1] < v[i] - tolv) up = false;
      if (v[i + 1] > v[i] + tolv) down = false;
    }
    return up || down;
  };
  std::size_t split = ratio.size();
  for (std::size_t i = 0; i + 1 < ratio.size(); ++i)
    if ((f.first(g.a + (g.b - g.a) * i / grid) < 0) != (f.first(g.a + (g.b - g.a) * (i + 1) / grid) < 0)) split = i + 1;
  rep.g_over_fprime_monotone = monotone(ratio, 0, split) && monotone(ratio, split, ratio.size());

  const auto br = detail::phase_breaks([&](double t) { return kTwoPi * f(t); }, g.a, g.b, detail::kPanelPhase);
  const auto o = detail::integrate(
      [&](double t) { return (t >= g.a && t <= g.b ? g.evaluator(t) : 0.0) * std::polar(1.0, kTwoPi * f(t)); }, br,
      1e-12 * std::max(1.0, rep.M * (g.b - g.a)));
  rep.integral = o.value;
  rep.abs_error = o.abs_error;
  rep.bound = rep.M == 0.0 ? 0.0 : 8.0 * rep.M / std::sqrt(rep.r);
  rep.verdict = verdict_of(std::abs(rep.integral) <= rep.bound + rep.abs_error);
  return rep;
}

// ---------------------------------------------------------------- the k-sum S1

enum class KSumMode { direct, kernel, asymptotic };

inline std::string_view to_string(KSumMode m) {
  switch (m) {
    case KSumMode::direct: return "direct";
    case KSumMode::kernel: return "kernel";
    case KSumMode::asymptotic: return "asymptotic";
  }
  return "?";
}

namespace detail {

/// R(w) = int_1^2 W(u) cos(2 pi w (u - 3/2)) du for the canonical bump W on [1, 2],
/// so that the Fourier transform is e(3w/2) R(w). Piecewise Chebyshev on unit panels.
class BumpTransform {
 public:
  static constexpr int kDegree = 20;
  static constexpr double kCutoff = 320.0;  // |R| < 1e-15 beyond

  static const BumpTransform& instance() {
    static const BumpTransform t;
    return t;
  }

  double operator()(double w) const {
    w = std::abs(w);
    if (w >= kCutoff) return 0.0;
    const auto panel = static_cast<std::size_t>(w);
    const double x = 2.0 * (w - static_cast<double>(panel)) - 1.0;
    const double* c = &coeffs_[panel * (kDegree + 1)];
    double b1 = 0.0, b2 = 0.0;
    for (int k = kDegree; k >= 1; --k) {
      const double b0 = 2.0 * x * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + c[0];
  }

  /// Direct quadrature value, used to build the table.
  double exact(double w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * std::cos(kTwoPi * w * nodes_[i]);
    return s;
  }

 private:
  BumpTransform() {
    constexpr int panels = 64;
    const auto& g = gl32();
    for (int p = 0; p < panels; ++p) {
      const double lo = 1.0 + static_cast<double>(p) / panels, half = 0.5 / panels;
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        const double u = lo + half * (1.0 + g.x[k]);
        nodes_.push_back(u - 1.5);
        weights_.push_back(half * g.w[k] * bump_profile(2.0 * u - 3.0));
      }
    }
    const int n = kDegree + 1;
    const auto P = static_cast<std::size_t>(kCutoff);
    coeffs_.assign(P * static_cast<std::size_t>(n), 0.0);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < P; ++p) {
      for (int j = 0; j < n; ++j) {
        const double x = std::cos(kPi * (j + 0.5) / n);
        vals[static_cast<std::size_t>(j)] = exact(static_cast<double>(p) + 0.5 * (x + 1.0));
      }
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += vals[static_cast<std::size_t>(j)] * std::cos(kPi * k * (j + 0.5) / n);
        coeffs_[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * s / n;
      }
    }
  }

  std::vector<double> nodes_, weights_, coeffs_;
};

inline ComplexEstimate ksum_direct(int K, double x) {
  const SmoothWeight W = bump(1.0, 2.0);
  CompensatedSum s;
  double err = 0.0;
  for (int k = K + 2; k - 1 < 2 * K; k += 2) {
    const double wt = W(static_cast<double>(k - 1) / K);
    if (wt == 0.0) continue;
    const auto j = bessel_j(k - 1, kTwoPi * x);
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    s += sign * wt * j.value;
    err += wt * j.abs_error;
  }
  return {s.value(), err, Method::series};
}

inline ComplexEstimate ksum_kernel(int K, double x) {
  const auto& R = BumpTransform::instance();
  const double kc = kTwoPi / K;
  // 2 pi x cos(kc w) = 2 pi frac(x) - 4 pi x sin^2(kc w / 2), exact near w = 0.
  const double base = kTwoPi * (x - std::floor(x));
  auto f = [&](double w) {
    const double sh = std::sin(0.5 * kc * w);
    return cplx(-2.0 * std::cos(3.0 * kPi * w) * R(w) * std::sin(base - 2.0 * kTwoPi * x * sh * sh), 0.0);
  };
  auto rate = [&](double w) {
    return std::max(kTwoPi * x * kc * std::abs(std::sin(kc * w)), std::sqrt(kTwoPi * x) * kc) + 4.0 * kPi + 1.0;
  };
  const auto br = rate_breaks(rate, 0.0, BumpTransform::kCutoff, kPanelPhase);
  const double noise = 2.0 * R(0.0) * 4.0 * kTwoPi * x * kEps;
  const auto o = integrate(f, br, 1e-12, kDefaultNodeBudget, noise);
  return {o.value, o.abs_error + 1e-13, Method::quadrature};
}

inline ComplexEstimate ksum_asymptotic(int K, double x) {
  const SmoothWeight W = bump(1.0, 2.0);
  const double Kd = K;
  const int J = static_cast<int>(std::ceil(2.0 * BumpTransform::kCutoff / Kd)) + 1;
  const double quad = Kd * Kd / (8.0 * kPi * kPi * x);
  CompensatedSum tp, tm;
  for (int j = -J; j <= J; ++j) {
    const double sigma = (j % 2 == 0) ? 1.0 : -1.0;
    auto inner = [&](double s) {
      PhaseSpec ph;
      ph.h = [=](double y) { return kTwoPi * (Kd * j * y / 2.0 + s * quad * y * y); };
      return Kd * oscillatory_quadrature(W, ph, 1e-12).value;
    };
    tp += e(sigma * x) * std::polar(1.0, -sigma * kPi / 4) * inner(sigma);
    tm += e(-sigma * x) * std::polar(1.0, sigma * kPi / 4) * inner(-sigma);
  }
  const double pref = 1.0 / (kTwoPi * std::sqrt(x));
  const cplx Tp = pref * tp.value(), Tm = pref * tm.value();
  const cplx v = -(Tp - Tm) / cplx(0.0, 2.0);
  const double rel = Kd * Kd / (4.0 * kPi * kPi * x) + 1.0 / (8.0 * kPi * x);
  return {v, std::abs(v) * rel, Method::asymptotic};
}

}  // namespace detail

/// S1(K, x) = sum over even k of i^{-k} W((k-1)/K) J_{k-1}(2 pi x), W the bump on [1, 2].
inline ComplexEstimate bessel_weighted_k_sum(int K, double x, KSumMode mode) {
  if (K < 8) throw std::invalid_argument("bessel_weighted_k_sum: K must be >= 8");
  if (!(x > 0)) throw std::invalid_argument("bessel_weighted_k_sum: x must be positive");
  switch (mode) {
    case KSumMode::direct: return detail::ksum_direct(K, x);
    case KSumMode::kernel: return detail::ksum_kernel(K, x);
    case KSumMode::asymptotic: return detail::ksum_asymptotic(K, x);
  }
  throw std::invalid_argument("bessel_weighted_k_sum: unknown mode");
}

// ---------------------------------------------------------------- corpora

struct PhaseCase {
  std::string name;
  SmoothWeight weight;
  PhaseSpec phase;
};

struct CorpusScales {
  double N = 1e4, t = 1e3, K = 10, Q = 100, Ntilde = 1e4;
};

/// Phases of the off-diagonal analysis at the given scales, each with a single
/// stationary point well inside its weight's support.
inline std::vector<PhaseCase> reference_phase_corpus(const CorpusScales& sc = {}) {
  std::vector<PhaseCase> out;
  auto interior = [](const SmoothWeight& w, const PhaseSpec& h, double lo, double hi) {
    try {
      const double t0 = detail::locate_stationary_point(h, w.a, w.b);
      return t0 >= w.a + lo * (w.b - w.a) && t0 <= w.a + hi * (w.b - w.a);
    } catch (const std::domain_error&) {
      return false;
    }
  };

  // I(m, n, c): t log v + 2 pi (sqrt(m N v) - n N v) / c on [1, 2].
  int taken = 0;
  for (double m : {2500.0, 1e4, 4e4})
    for (int n : {1, 2})
      for (int c = 30; c <= 120 && taken < 6; c += 10) {
        const double a = std::sqrt(m * sc.N), b = n * sc.N, t = sc.t, cd = c;
        PhaseSpec h;
        h.h = [=](double v) { return t * std::log(v) + kTwoPi * (a * std::sqrt(v) - b * v) / cd; };
        h.d1 = [=](double v) { return t / v + kTwoPi * (0.5 * a / std::sqrt(v) - b) / cd; };
        h.d2 = [=](double v) { return -t / (v * v) - kTwoPi * 0.25 * a / (v * std::sqrt(v) * cd); };
        h.Y = t;
        h.Q = 1.0;
        const SmoothWeight w = bump(1.0, 2.0);
        if (!interior(w, h, 0.25, 0.75)) continue;
        ++taken;
        out.push_back({"I(m=" + std::to_string(static_cast<long>(m)) + ",n=" + std::to_string(n) +
                           ",c=" + std::to_string(c) + ")",
                       w, h});
      }

  // G1 and its mirror G2 in x1 on [1, sqrt 2].
  taken = 0;
  for (int c1 : {50, 100})
    for (double x3 : {1.1, 1.3})
      for (int n1 = 1; n1 <= 12 && taken < 8; ++n1) {
        const double quad = sc.N * n1 / c1, lin = std::sqrt(sc.N * sc.Ntilde) / c1 * x3, t = sc.t;
        for (double sign : {1.0, -1.0}) {
          PhaseSpec h;
          h.h = [=](double x) { return sign * (2 * t * std::log(x) - quad * x * x - lin * x); };
          h.d1 = [=](double x) { return sign * (2 * t / x - 2 * quad * x - lin); };
          h.d2 = [=](double x) { return sign * (-2 * t / (x * x) - 2 * quad); };
          h.Y = t;
          h.Q = 1.0;
          const SmoothWeight w = bump(1.0, std::sqrt(2.0));
          if (!interior(w, h, 0.3, 0.7)) continue;
          ++taken;
          out.push_back({std::string(sign > 0 ? "G1" : "G2") + "(n=" + std::to_string(n1) + ",c=" +
                             std::to_string(c1) + ",x3=" + std::to_string(x3).substr(0, 3) + ")",
                         w, h});
        }
      }

  // v-integral of the k-sum reduction: uv - 4 pi^2 x v^2 / K^2 in cycles.
  for (double xs : {4.0, 10.0})
    for (double u : {1.2, 1.7}) {
      const double x = xs * sc.K * sc.K, coef = 4 * kPi * kPi * x / (sc.K * sc.K);
      PhaseSpec h;
      h.h = [=](double v) { return kTwoPi * (u * v - coef * v * v); };
      h.d1 = [=](double v) { return kTwoPi * (u - 2 * coef * v); };
      h.d2 = [=](double) { return -kTwoPi * 2 * coef; };
      h.Y = kTwoPi * coef;
      h.Q = 1.0;
      out.push_back({"v-phase(x=" + std::to_string(static_cast<int>(xs)) + "K^2,u=" + std::to_string(u).substr(0, 3) +
                         ")",
                     plateau_bump(-2.0, -1.0, 1.0, 2.0), h});
    }
  return out;
}

/// Randomized inputs for the second-derivative test: f'' of one sign, g either a
/// monotone linear profile or a bump.
inline std::vector<PhaseCase> second_derivative_corpus(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<PhaseCase> out;
  for (int i = 0; i < count; ++i) {
    const double a = 0.5 + 2.5 * U(rng), L = 0.2 + 2.8 * U(rng), b = a + L;
    const double alpha = std::pow(10.0, 3.0 * U(rng) - 0.5), beta = 20.0 * U(rng) * U(rng),
                 gamma = 200.0 * U(rng) * U(rng), shift = (U(rng) - 0.5) * 20.0;
    const double sign = U(rng) < 0.5 ? 1.0 : -1.0;
    PhaseSpec f;
    f.h = [=](double x) { return sign * (alpha * x * x + beta * x * x * x + gamma * x * std::log(x) + shift * x); };
    f.d1 = [=](double x) {
      return sign * (2 * alpha * x + 3 * beta * x * x + gamma * (std::log(x) + 1.0) + shift);
    };
    f.d2 = [=](double x) { return sign * (2 * alpha + 6 * beta * x + gamma / x); };
    const double M0 = 0.1 + 5.0 * U(rng);
    SmoothWeight g;
    if (i % 2 == 0) {
      const double slope = -0.9 + 2.9 * U(rng);
      g = {[=](double x) { return M0 * (1.0 + slope * (x - a) / L); }, a, b, M0, L};
    } else {
      g = bump(a, b);
      g.evaluator = [inner = g.evaluator, M0](double x) { return M0 * inner(x); };
      g.X = M0;
    }
    out.push_back({"case " + std::to_string(i), g, f});
  }
  return out;
}

}  // namespace weylcheck
