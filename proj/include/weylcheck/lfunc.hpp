#pragma once

// Central values L(1/2 + it, f) by a smoothed approximate functional equation,
// the smoothed sums S(N), and the t-scan harness.
//
// The cutoff is V(y) = (1/2 pi i) int G(u) gamma(s+u)/gamma(s) y^{-u} du/u with
// G(u) = exp(u^2/A - i theta u). The linear term cancels the exponential growth of
// the gamma ratio along vertical lines (theta is its rate at u = 0), so the
// trapezoid rule on a vertical line converges geometrically with a short window.

#include <algorithm>
#include <exception>
#include <cmath>
#include <limits>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "weylcheck/core.hpp"
#include "weylcheck/modforms.hpp"
#include "weylcheck/oscint.hpp"
#include "weylcheck/special.hpp"

namespace weylcheck {

enum class LKind { holomorphic, maass };

struct CoefficientSource {
  enum class Origin { computed, ingested } origin = Origin::computed;
  std::vector<double> values;  // index 0 unused
  std::size_t n_max() const { return values.empty() ? 0 : values.size() - 1; }
  double operator[](std::size_t n) const { return values[n]; }
};

struct LFunctionSpec {
  LKind kind = LKind::holomorphic;
  int weight = 12;       // holomorphic
  double nu = 0.0;       // Maass spectral parameter
  bool odd = false;      // Maass parity
  CoefficientSource coefficients;
  cplx root_number{1.0, 0.0};
  std::string name;
};

inline LFunctionSpec holomorphic_spec(const Eigenform& f) {
  LFunctionSpec s;
  s.kind = LKind::holomorphic;
  s.weight = f.weight;
  s.coefficients.origin = CoefficientSource::Origin::computed;
  s.coefficients.values = f.lambda;
  s.root_number = (f.weight % 4 == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);  // i^k
  s.name = "weight " + std::to_string(f.weight) + " eigenform";
  return s;
}

inline LFunctionSpec delta_spec(std::size_t n_max) {
  auto s = holomorphic_spec(delta_eigenform(n_max));
  s.name = "Delta";
  return s;
}

// ---------------------------------------------------------------- Maass files

struct MaassFileCheck {
  double rankin_selberg_ratio = 0.0;  // sum_{n <= x} lambda(n)^2 / x at x = n_max
  std::size_t bound_violations = 0;   // n with |lambda(n)| > 2 n^{7/64}
  bool ok = false;
};

/// Parses `# nu = ..`, `# epsilon = ..`, `# parity = ..` headers and `n,lambda_n` rows.
inline LFunctionSpec parse_maass(std::istream& in, MaassFileCheck* check = nullptr) {
  LFunctionSpec s;
  s.kind = LKind::maass;
  s.coefficients.origin = CoefficientSource::Origin::ingested;
  s.coefficients.values.push_back(0.0);
  bool have_nu = false, have_eps = false, have_parity = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1), val = line.substr(eq + 1);
      key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
      val.erase(std::remove_if(val.begin(), val.end(), ::isspace), val.end());
      if (key == "nu") {
        s.nu = std::stod(val);
        have_nu = true;
      } else if (key == "epsilon") {
        if (val != "+1" && val != "1" && val != "-1")
          throw std::invalid_argument("parse_maass: epsilon must be +1 or -1");
        s.root_number = cplx(val == "-1" ? -1.0 : 1.0, 0.0);
        have_eps = true;
      } else if (key == "parity") {
        if (val != "even" && val != "odd") throw std::invalid_argument("parse_maass: parity must be even or odd");
        s.odd = val == "odd";
        have_parity = true;
      }
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("parse_maass: line " + std::to_string(lineno) + " is not n,lambda_n");
    const long n = std::stol(line.substr(0, comma));
    const double v = std::stod(line.substr(comma + 1));
    if (n != static_cast<long>(s.coefficients.values.size()))
      throw std::invalid_argument("parse_maass: coefficients must be consecutive from n = 1 (line " +
                                  std::to_string(lineno) + ")");
    s.coefficients.values.push_back(v);
  }
  if (!have_nu) throw std::invalid_argument("parse_maass: missing '# nu =' header");
  if (s.coefficients.n_max() < 1) throw std::invalid_argument("parse_maass: no coefficients");
  if (std::abs(s.coefficients[1] - 1.0) > 1e-12) throw std::invalid_argument("parse_maass: lambda(1) must be 1");
  if (!have_parity) s.odd = false;
  if (!have_eps) s.root_number = cplx(s.odd ? -1.0 : 1.0, 0.0);
  MaassFileCheck c;
  double sq = 0.0;
  for (std::size_t n = 1; n <= s.coefficients.n_max(); ++n) {
    sq += s.coefficients[n] * s.coefficients[n];
    if (std::abs(s.coefficients[n]) > 2.0 * std::pow(static_cast<double>(n), 7.0 / 64.0)) ++c.bound_violations;
  }
  c.rankin_selberg_ratio = sq / static_cast<double>(s.coefficients.n_max());
  c.ok = c.rankin_selberg_ratio >= 0.05 && c.rankin_selberg_ratio <= 20.0;
  if (check) *check = c;
  if (!c.ok)
    throw std::invalid_argument("parse_maass: Rankin-Selberg ratio " + std::to_string(c.rankin_selberg_ratio) +
                                " outside [0.05, 20]; file looks misnormalized");
  s.name = "Maass nu=" + std::to_string(s.nu);
  return s;
}

inline LFunctionSpec load_maass(const std::string& path, MaassFileCheck* check = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_maass: cannot open " + path);
  return parse_maass(in, check);
}

// ---------------------------------------------------------------- gamma data

/// log gamma(s) for the completed L-function.
inline cplx log_gamma_factor(const LFunctionSpec& spec, cplx s) {
  constexpr int terms = 20;
  if (spec.kind == LKind::holomorphic)
    return -s * std::log(kTwoPi) + gamma_stirling(s + 0.5 * (spec.weight - 1), terms).value;
  const double shift = spec.odd ? 1.0 : 0.0;
  const cplx inu(0.0, spec.nu);
  return -s * std::log(kPi) + gamma_stirling(0.5 * (s + shift + inu), terms).value +
         gamma_stirling(0.5 * (s + shift - inu), terms).value;
}

/// Analytic conductor at 1/2 + it.
inline double analytic_conductor(const LFunctionSpec& spec, double t) {
  const cplx s(0.5, t);
  if (spec.kind == LKind::holomorphic) return std::norm(s + 0.5 * (spec.weight - 1)) / (4 * kPi * kPi);
  const double shift = spec.odd ? 1.0 : 0.0;
  return std::abs((s + shift) * (s + shift) + spec.nu * spec.nu) / (4 * kPi * kPi);
}

/// Real part of the leftmost gamma pole, measured from s.
inline double left_pole_distance(const LFunctionSpec& spec) {
  if (spec.kind == LKind::holomorphic) return 0.5 * spec.weight;
  return spec.odd ? 1.5 : 0.5;
}

// ---------------------------------------------------------------- AFE cutoff

inline constexpr double kMollifierA = 32.0;

/// Trapezoid discretization of V_s(y) on two vertical lines, one on each side of u = 0.
class AfeCutoff {
 public:
  AfeCutoff(const LFunctionSpec& spec, double t) : s_(0.5, t) {
    const cplx lg0 = log_gamma_factor(spec, s_);
    phase_scale_ = 16.0 + std::abs(lg0.imag());
    const double d = 1e-4;
    const cplx slope = (log_gamma_factor(spec, s_ + d) - log_gamma_factor(spec, s_ - d)) / (2 * d);
    theta_ = slope.imag();
    log_center_ = slope.real();
    const double right = 1.0, left = -std::min(1.0, 0.5 * left_pole_distance(spec));
    const double dist = std::min(right, -left);
    h_ = kTwoPi * dist / std::log(1e17);
    const double vmax = std::sqrt(40.0 * kMollifierA) + 2.0;
    build(spec, lg0, right, vmax, right_);
    build(spec, lg0, left, vmax, left_);
    vmax_ = vmax;
  }

  /// V_s(y) for y > 0.
  cplx operator()(double y) const {
    const double ly = std::log(y);
    const bool use_left = ly < log_center_;
    const auto& line = use_left ? left_ : right_;
    // y^{-u} = y^{-sigma} e^{-i v ln y}, v stepping by h from -vmax
    const cplx step = std::polar(1.0, -h_ * ly);
    cplx rot = std::polar(1.0, vmax_ * ly);
    cplx acc{};
    for (const cplx& w : line.weights) {
      acc += w * rot;
      rot *= step;
    }
    acc *= std::exp(-line.sigma * ly);
    return use_left ? 1.0 + acc : acc;
  }

  /// Rounding level of operator()(y). The weights carry the absolute phase error of
  /// log gamma at height t, and the sum cancels from its l1 mass.
  double noise(double y) const {
    const double ly = std::log(y);
    const auto& line = ly < log_center_ ? left_ : right_;
    return std::numeric_limits<double>::epsilon() * phase_scale_ * line.mass * std::exp(-line.sigma * ly);
  }

  double log_center() const { return log_center_; }
  double theta() const { return theta_; }

 private:
  struct Line {
    double sigma;
    double mass = 0.0;
    std::vector<cplx> weights;
  };

  void build(const LFunctionSpec& spec, cplx lg0, double sigma, double vmax, Line& line) const {
    line.sigma = sigma;
    const int n = static_cast<int>(std::ceil(2 * vmax / h_));
    line.weights.reserve(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
      const cplx u(sigma, -vmax + j * h_);
      const cplx logG = u * u / kMollifierA - cplx(0.0, theta_) * u;
      const cplx ratio = log_gamma_factor(spec, s_ + u) - lg0;
      line.weights.push_back(h_ / kTwoPi * std::exp(logG + ratio) / u);
      line.mass += std::abs(line.weights.back());
    }
  }

  cplx s_;
  double theta_ = 0.0, log_center_ = 0.0, h_ = 0.1, vmax_ = 0.0, phase_scale_ = 16.0;
  Line right_, left_;
};

/// V_t(balance * y): the first-sum weight of the approximate functional equation.
inline cplx afe_weight(double y, double t, const LFunctionSpec& spec, double balance) {
  if (!(y > 0)) throw std::invalid_argument("afe_weight: y must be positive");
  if (!(balance >= 0.25 && balance <= 4.0)) throw std::invalid_argument("afe_weight: balance must lie in [1/4, 4]");
  return AfeCutoff(spec, t)(balance * y);
}

// ---------------------------------------------------------------- central values

struct CentralValue {
  ComplexEstimate estimate;
  std::size_t afe_length = 0;  // largest n used
};

namespace detail {

inline constexpr double kCutoffFloor = 1e-14;

/// Terms needed before |V| stays below the floor, from the cutoff itself.
inline std::size_t afe_terms(const AfeCutoff& V, double scale) {
  std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::exp(V.log_center()) * scale));
  int quiet = 0;
  while (quiet < 8) {
    const double y = static_cast<double>(n) / scale;
    if (std::abs(V(y)) < std::max(kCutoffFloor, V.noise(y)))
      ++quiet;
    else
      quiet = 0;
    n = n + n / 16 + 1;
    if (n > 100'000'000) throw std::runtime_error("central_value: cutoff does not decay");
  }
  return n;
}

}  // namespace detail

inline std::size_t required_length(const LFunctionSpec& spec, double t, double balance) {
  const AfeCutoff V(spec, t);
  return std::max(detail::afe_terms(V, balance), detail::afe_terms(V, 1.0 / balance));
}

/// L(1/2 + it) = sum lambda(n) n^{-s} V(n / X) + eps gamma(1-s)/gamma(s) sum lambda(n) n^{s-1} conj V(n X), X = balance.
inline CentralValue central_value(const LFunctionSpec& spec, double t, double balance, const AfeCutoff* shared = nullptr) {
  if (!(balance >= 0.25 && balance <= 4.0)) throw std::invalid_argument("central_value: balance must lie in [1/4, 4]");
  std::optional<AfeCutoff> own;
  if (!shared) own.emplace(spec, t);
  const AfeCutoff& V = shared ? *shared : *own;
  const std::size_t n1 = detail::afe_terms(V, balance), n2 = detail::afe_terms(V, 1.0 / balance);
  const std::size_t need = std::max(n1, n2);
  if (need > spec.coefficients.n_max())
    throw std::out_of_range("central_value: need " + std::to_string(need) + " coefficients, have " +
                            std::to_string(spec.coefficients.n_max()));
  const cplx s(0.5, t);
  CompensatedSum first, second;
  double mass = 0.0;
  for (std::size_t n = 1; n <= need; ++n) {
    const double lam = spec.coefficients[n];
    if (lam == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    const cplx ns = std::polar(1.0 / std::sqrt(static_cast<double>(n)), -t * ln);  // n^{-s}
    const double dn = static_cast<double>(n);
    const cplx a = lam * ns * V(dn / balance);
    const cplx b = lam * std::conj(ns) * std::conj(V(dn * balance));
    first += a;
    second += b;
    mass += std::abs(a) + std::abs(b);
  }
  const cplx root = spec.root_number * std::exp(log_gamma_factor(spec, 1.0 - s) - log_gamma_factor(spec, s));
  const cplx value = first.value() + root * second.value();
  CentralValue out;
  const double tail = std::max(detail::kCutoffFloor, V.noise(1.0)) * std::sqrt(static_cast<double>(need));
  out.estimate = {value, 64 * detail::kEps * mass + 4 * tail * (1.0 + std::abs(root)), Method::series};
  out.afe_length = need;
  return out;
}

/// Completed value Lambda(1/2 + it) = gamma(s) L(s).
inline cplx completed_value(const LFunctionSpec& spec, double t, double balance = 1.0) {
  return std::exp(log_gamma_factor(spec, cplx(0.5, t))) * central_value(spec, t, balance).estimate.value;
}

// ---------------------------------------------------------------- S(N)

/// sum over the support of W(n/N) of lambda(n) n^{it} W(n/N).
inline cplx sn_sum(const CoefficientSource& F, std::int64_t N, double t, const SmoothWeight& W) {
  if (N < 1) throw std::invalid_argument("sn_sum: N must be positive");
  const auto lo = static_cast<std::int64_t>(std::floor(W.a * static_cast<double>(N)));
  const auto hi = static_cast<std::int64_t>(std::ceil(W.b * static_cast<double>(N)));
  if (static_cast<std::size_t>(hi) > F.n_max())
    throw std::out_of_range("sn_sum: need coefficients through " + std::to_string(hi));
  CompensatedSum s;
  for (std::int64_t n = std::max<std::int64_t>(1, lo); n <= hi; ++n) {
    const double w = W(static_cast<double>(n) / static_cast<double>(N));
    if (w == 0.0) continue;
    s += F[static_cast<std::size_t>(n)] * w * std::polar(1.0, t * std::log(static_cast<double>(n)));
  }
  return s.value();
}

// ---------------------------------------------------------------- scan

struct ScanRecord {
  double t = 0.0;
  double modulus = 0.0;
  std::size_t afe_length = 0;
  double consistency_gap = 0.0;
  double convexity_ratio = 0.0;  // modulus / t^{1/2}
  double weyl_ratio = 0.0;       // modulus / t^{1/3}
  bool accepted = false;
};

struct ScanSummary {
  std::size_t records = 0, rejected = 0;
  double max_convexity_ratio = 0.0, max_weyl_ratio = 0.0;
  std::optional<double> slope, intercept;  // log(peak |L|) against log t
  std::size_t peaks_used = 0;
};

inline constexpr double kBalanceLow = 0.70710678118654752440, kBalanceHigh = 1.41421356237309504880;
inline constexpr double kConsistencyGate = 1e-6;

inline ScanRecord scan_point(const LFunctionSpec& spec, double t) {
  const AfeCutoff V(spec, t);
  const auto a = central_value(spec, t, kBalanceLow, &V);
  const auto b = central_value(spec, t, kBalanceHigh, &V);
  ScanRecord r;
  r.t = t;
  r.modulus = std::abs(a.estimate.value);
  r.afe_length = std::max(a.afe_length, b.afe_length);
  r.consistency_gap = std::abs(a.estimate.value - b.estimate.value) / std::max(1.0, r.modulus);
  const double at = std::max(std::abs(t), 1.0);
  r.convexity_ratio = r.modulus / std::sqrt(at);
  r.weyl_ratio = r.modulus / std::cbrt(at);
  r.accepted = r.consistency_gap <= kConsistencyGate;
  return r;
}

inline std::vector<double> scan_grid(double t_min, double t_max, double step) {
  if (!(step > 0)) throw std::invalid_argument("exponent_scan: step must be positive");
  if (t_max > 5000) throw std::invalid_argument("exponent_scan: t_max must be <= 5000");
  std::vector<double> ts;
  if (!(t_max > t_min)) return ts;
  const auto count = static_cast<long>(std::floor((t_max - t_min) / step + 1e-9));
  for (long i = 0; i <= count; ++i) ts.push_back(t_min + static_cast<double>(i) * step);
  return ts;
}

/// Peak fit: the t-range is cut into `bins` equal slices of log t and the largest
/// accepted modulus in each slice enters a least-squares line in (log t, log |L|).
inline ScanSummary summarize_scan(const std::vector<ScanRecord>& recs, int bins = 12) {
  ScanSummary s;
  s.records = recs.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : recs) {
    if (!r.accepted) {
      ++s.rejected;
      continue;
    }
    s.max_convexity_ratio = std::max(s.max_convexity_ratio, r.convexity_ratio);
    s.max_weyl_ratio = std::max(s.max_weyl_ratio, r.weyl_ratio);
    if (r.t > 1.0 && r.modulus > 0) {
      lo = std::min(lo, std::log(r.t));
      hi = std::max(hi, std::log(r.t));
    }
  }
  if (!(hi > lo)) return s;
  std::vector<const ScanRecord*> best(static_cast<std::size_t>(bins), nullptr);
  for (const auto& r : recs) {
    if (!r.accepted || !(r.t > 1.0) || !(r.modulus > 0)) continue;
    auto b = static_cast<std::size_t>((std::log(r.t) - lo) / (hi - lo) * bins);
    b = std::min(b, static_cast<std::size_t>(bins - 1));
    if (!best[b] || r.modulus > best[b]->modulus) best[b] = &r;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto* r : best) {
    if (!r) continue;
    const double x = std::log(r->t), y = std::log(r->modulus);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  s.peaks_used = static_cast<std::size_t>(n);
  if (n >= 2) {
    s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    s.intercept = (sy - *s.slope * sx) / n;
  }
  return s;
}

/// Records are computed by `parallelism` workers taking strided slots, so the
/// output order and every value are independent of the worker count.
inline std::vector<ScanRecord> exponent_scan(const LFunctionSpec& spec, double t_min, double t_max, double step,
                                             unsigned parallelism = 1) {
  const auto ts = scan_grid(t_min, t_max, step);
  std::vector<ScanRecord> out(ts.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(ts.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = scan_point(spec, ts[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < ts.size(); i += workers) out[i] = scan_point(spec, ts[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace weylcheck
