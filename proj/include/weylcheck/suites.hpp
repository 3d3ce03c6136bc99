#pragma once

// Verification suites shared by the acceptance runner and the command-line tool.
// Each suite returns a table of per-case rows, summary metrics and a verdict.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "weylcheck/characters.hpp"
#include "weylcheck/expsums.hpp"
#include "weylcheck/lfunc.hpp"
#include "weylcheck/modforms.hpp"
#include "weylcheck/oscint.hpp"
#include "weylcheck/pipeline.hpp"
#include "weylcheck/report.hpp"
#include "weylcheck/trace.hpp"

namespace weylcheck {

using Cell = std::variant<std::int64_t, double, std::string>;

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  return std::get<std::string>(c);
}

struct SuiteResult {
  std::string name;
  Verdict verdict = Verdict::fail;
  double seconds = 0.0;
  double budget = 0.0;  // seconds; 0 means unbudgeted
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> metrics;
  std::vector<std::string> notes;
  std::size_t passed = 0, failed = 0, inconclusive = 0;

  void count(Verdict v) {
    if (v == Verdict::pass) ++passed;
    else if (v == Verdict::fail) ++failed;
    else ++inconclusive;
  }
  void metric(std::string key, Cell value) { metrics.emplace_back(std::move(key), std::move(value)); }
};

namespace detail {

/// Runs body, stamps the wall time and fails the suite when it overruns its budget.
inline SuiteResult timed(std::string name, double budget, const std::function<void(SuiteResult&)>& body) {
  SuiteResult r;
  r.name = std::move(name);
  r.budget = budget;
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget > 0 && r.seconds > budget) {
    r.notes.push_back("runtime " + std::to_string(r.seconds) + " s exceeds budget " + std::to_string(budget) + " s");
    r.verdict = Verdict::fail;
  }
  return r;
}

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------- character sums

inline SuiteResult charsum_suite(std::int64_t c_max = 40, std::int64_t congruence_max = 12, double tol = 1e-9) {
  return detail::timed("charsum", 60.0, [&](SuiteResult& r) {
    r.columns = {"identity", "c", "cases", "max_deviation"};
    double grid_max = 0.0, cong_max = 0.0;
    for (std::int64_t c = 1; c <= c_max; ++c) {
      double dev = 0.0;
      std::int64_t cases = 0;
      for (std::int64_t n = 1; n <= c; ++n) {
        if (gcd(n, c) != 1) continue;
        for (std::int64_t m = 0; m < c; ++m) {
          dev = std::max(dev, *charsum_grid(m, n, c).deviation);
          ++cases;
        }
      }
      grid_max = std::max(grid_max, dev);
      r.rows.push_back({std::string("grid"), c, cases, dev});
      r.count(verdict_of(dev <= tol));
    }
    for (std::int64_t c1 = 1; c1 <= congruence_max; ++c1)
      for (std::int64_t c2 = 1; c2 <= congruence_max; ++c2) {
        if (gcd(c1, c2) != 1) continue;
        double dev = 0.0;
        std::int64_t cases = 0;
        for (std::int64_t n1 = 1; n1 <= c1; ++n1)
          for (std::int64_t n2 = 1; n2 <= c2; ++n2) {
            if (gcd(n1, c1) != 1 || gcd(n2, c2) != 1) continue;
            for (std::int64_t m = 0; m < c1 * c2; ++m) {
              dev = std::max(dev, charsum_congruence(m, n1, n2, c1, c2).deviation);
              ++cases;
            }
          }
        cong_max = std::max(cong_max, dev);
        r.rows.push_back({std::string("congruence"), c1 * 100 + c2, cases, dev});
        r.count(verdict_of(dev <= tol));
      }
    r.metric("grid_max_deviation", grid_max);
    r.metric("congruence_max_deviation", cong_max);
    r.verdict = verdict_of(grid_max <= tol && cong_max <= tol);
    r.notes.push_back("closed form max dev " + detail::sci(grid_max) + " (c <= " + std::to_string(c_max) +
                      "), indicator max dev " + detail::sci(cong_max) + " (c1, c2 <= " + std::to_string(congruence_max) + ")");
  });
}

inline SuiteResult twisted_factorization_suite(const std::vector<std::int64_t>& primes = {3, 5, 7, 11, 13},
                                               std::int64_t c_max = 20, double tol = 1e-9) {
  return detail::timed("twisted-factorization", 120.0, [&](SuiteResult& r) {
    r.columns = {"q", "character", "c", "nu", "n", "m_prime", "lhs_vs_middle", "lhs_vs_stated", "lhs_vs_corrected"};
    double mid = 0.0, corr = 0.0, stated = 0.0;
    std::size_t stated_fail = 0;
    std::string counterexample;
    for (auto q : primes) {
      const auto chars = enumerate_characters(q);
      for (std::size_t i = 0; i < chars.size(); ++i) {
        const auto& chi = chars[i];
        if (!chi.is_odd() || !chi.is_primitive()) continue;
        for (std::int64_t c = 1; c <= c_max; ++c) {
          if (gcd(c, q) != 1) continue;
          for (int nu : {0, 1})
            for (std::int64_t n = 1; n <= 3; ++n)
              for (std::int64_t mp = 1; mp < q; ++mp) {
                const auto f = verify_twisted_factorization(chi, n, mp, nu, c);
                mid = std::max(mid, f.lhs_vs_middle);
                corr = std::max(corr, f.lhs_vs_corrected);
                stated = std::max(stated, f.lhs_vs_stated);
                if (f.lhs_vs_stated > tol) {
                  if (stated_fail++ == 0)
                    counterexample = "q=" + std::to_string(q) + " psi#" + std::to_string(i) + " c=" + std::to_string(c) +
                                     " nu=" + std::to_string(nu) + " n=" + std::to_string(n) + " m'=" + std::to_string(mp) +
                                     ": lhs=" + detail::sci(f.lhs.real()) + (f.lhs.imag() < 0 ? "" : "+") +
                                     detail::sci(f.lhs.imag()) + "i, stated=" + detail::sci(f.stated.real()) +
                                     (f.stated.imag() < 0 ? "" : "+") + detail::sci(f.stated.imag()) + "i";
                }
                r.rows.push_back({q, static_cast<std::int64_t>(i), c, static_cast<std::int64_t>(nu), n, mp, f.lhs_vs_middle,
                                  f.lhs_vs_stated, f.lhs_vs_corrected});
                r.count(verdict_of(f.lhs_vs_middle <= tol && f.lhs_vs_corrected <= tol));
              }
        }
      }
    }
    r.metric("lhs_vs_middle_max", mid);
    r.metric("lhs_vs_corrected_max", corr);
    r.metric("lhs_vs_stated_max", stated);
    r.metric("stated_form_failures", static_cast<std::int64_t>(stated_fail));
    r.verdict = verdict_of(mid <= tol && corr <= tol);
    r.notes.push_back("corrected variant psi(-1) sqrt(q) conj(eps) psi(m' cbar) S(n, m' q^nu; c): max dev " + detail::sci(corr) +
                      " over " + std::to_string(r.rows.size()) + " cases");
    if (stated_fail)
      r.notes.push_back("stated form (without psi(-1)) deviates in " + std::to_string(stated_fail) + " cases; minimal: " +
                        counterexample);
  });
}

inline SuiteResult average_convention_suite(const std::vector<std::int64_t>& primes = {3, 5, 7, 11, 13}, double tol = 1e-9) {
  return detail::timed("odd-average", 60.0, [&](SuiteResult& r) {
    r.columns = {"q", "matched_sign", "matched_inverse", "max_deviation", "m_prime_spread"};
    std::optional<std::size_t> convention;
    bool consistent = true;
    for (auto q : primes) {
      const auto conv = discover_average_convention(q, tol);
      if (!conv.matched) {
        consistent = false;
        r.rows.push_back({q, std::string("none"), std::string("none"), conv.candidates[0].max_deviation, conv.m_prime_spread});
        r.count(Verdict::fail);
        continue;
      }
      const auto& cand = conv.candidates[*conv.matched];
      if (convention && *convention != *conv.matched) consistent = false;
      convention = conv.matched;
      r.rows.push_back({q, static_cast<std::int64_t>(cand.sign), std::string(cand.inverse ? "true" : "false"), cand.max_deviation,
                        conv.m_prime_spread});
      r.count(Verdict::pass);
    }
    r.verdict = verdict_of(consistent && r.failed == 0);
    if (convention) {
      r.notes.push_back(std::string("convention: (phi(q)/(2 sqrt q)) u (e(x/q) - e(-x/q)) with ") +
                        (*convention % 2 == 0 ? "u = +1" : "u = -1") + ", x = " + (*convention >= 2 ? "inverse of c l" : "c l"));
    }
    r.metric("single_convention", std::string(consistent ? "true" : "false"));
  });
}

// ---------------------------------------------------------------- Petersson

inline SuiteResult petersson_suite(int k_empty = 10, int grid_empty = 5, const std::vector<int>& rank_one = {12, 16, 18, 20, 22, 26},
                                   int grid = 8) {
  return detail::timed("petersson", 120.0, [&](SuiteResult& r) {
    r.columns = {"k", "check", "measured", "threshold"};
    bool ok = true;
    auto add = [&](int k, const std::string& what, double v, double thr) {
      const bool pass = v <= thr;
      ok = ok && pass;
      r.rows.push_back({static_cast<std::int64_t>(k), what, v, thr});
      r.count(verdict_of(pass));
    };
    const auto empty = trace_consistency(k_empty, grid_empty, 1e-8);
    add(k_empty, "max |Delta| (empty space)", empty.max_abs, 1e-8);
    for (int k : rank_one) {
      const auto t = trace_consistency(k, grid, 1e-6);
      add(k, "singular value ratio", t.singular_ratio, 1e-6);
      if (k == 12) add(k, "|lambda(2) + 24/2^5.5|", std::abs(t.recovered_lambda[2] + 24.0 / std::pow(2.0, 5.5)), 1e-7);
    }
    const auto two = trace_consistency(24, grid, 1e-6);
    add(24, "dim-2 residual", two.residual, 1e-6);
    r.verdict = verdict_of(ok);
    r.notes.push_back("k=" + std::to_string(k_empty) + " max|Delta| " + detail::sci(empty.max_abs) + ", k=24 residual " +
                      detail::sci(two.residual));
  });
}

// ---------------------------------------------------------------- Bessel k-sum

inline SuiteResult besselsum_suite(const std::vector<int>& Ks = {8, 16, 32}, const std::vector<double>& xs = {10, 1e2, 1e3, 1e4},
                                   double tol = 1e-8, double suppression = 1e6) {
  return detail::timed("besselsum", 60.0, [&](SuiteResult& r) {
    r.columns = {"K", "x", "direct", "kernel", "gap"};
    double gap_max = 0.0;
    for (int K : Ks)
      for (double x : xs) {
        const auto d = bessel_weighted_k_sum(K, x, KSumMode::direct);
        const auto k = bessel_weighted_k_sum(K, x, KSumMode::kernel);
        const double gap = std::abs(d.value - k.value);
        gap_max = std::max(gap_max, gap);
        r.rows.push_back({static_cast<std::int64_t>(K), x, d.value.real(), k.value.real(), gap});
        r.count(verdict_of(gap <= tol));
      }
    double worst = std::numeric_limits<double>::infinity(), deep = std::numeric_limits<double>::infinity();
    for (int K : Ks) {
      const double KK = static_cast<double>(K) * K;
      const double top = std::abs(bessel_weighted_k_sum(K, 4 * KK, KSumMode::direct).value);
      const double low = std::abs(bessel_weighted_k_sum(K, KK / 16, KSumMode::direct).value);
      const double below = std::abs(bessel_weighted_k_sum(K, KK / (16 * std::pow(kPi, 3)), KSumMode::direct).value);
      worst = std::min(worst, top / low);
      deep = std::min(deep, top / below);
      r.rows.push_back({static_cast<std::int64_t>(K), KK / 16, low, top, top / low});
      r.count(verdict_of(top / low >= suppression));
    }
    r.metric("direct_kernel_gap_max", gap_max);
    r.metric("suppression_ratio_min", worst);
    r.metric("suppression_ratio_at_K2_over_16pi3", deep);
    r.verdict = verdict_of(gap_max <= tol && worst >= suppression);
    r.notes.push_back("direct/kernel gap " + detail::sci(gap_max) + "; |S1(4K^2)|/|S1(K^2/16)| min " + detail::sci(worst) +
                      " (need " + detail::sci(suppression) + "); at x = K^2/(16 pi^3) the ratio is " + detail::sci(deep));
  });
}

// ---------------------------------------------------------------- stationary phase

inline SuiteResult stationary_phase_suite(std::uint64_t seed = 20240601, int count = 200, double rel_tol = 0.02) {
  return detail::timed("stationary-phase", 120.0, [&](SuiteResult& r) {
    r.columns = {"case", "quadrature_abs", "order0_abs", "relative_error", "verdict"};
    double worst = 0.0;
    for (const auto& c : reference_phase_corpus()) {
      const auto q = oscillatory_quadrature(c.weight, c.phase, 1e-12);
      const auto s = stationary_phase_eval(c.weight, c.phase, 0);
      const double rel = std::abs(s.estimate.value - q.value) / std::abs(q.value);
      worst = std::max(worst, rel);
      const Verdict v = verdict_of(rel <= rel_tol);
      r.rows.push_back({c.name, std::abs(q.value), std::abs(s.estimate.value), rel, std::string(to_string(v))});
      r.count(v);
    }
    std::size_t violations = 0;
    double ratio = 0.0;
    for (const auto& c : second_derivative_corpus(seed, count)) {
      const auto b = second_derivative_bound_check(c.weight, c.phase);
      if (b.verdict != Verdict::pass) ++violations;
      const double rt = std::abs(b.integral) / b.bound;
      ratio = std::max(ratio, rt);
      r.rows.push_back({c.name, std::abs(b.integral), b.bound, rt, std::string(to_string(b.verdict))});
      r.count(b.verdict);
    }
    r.metric("order0_worst_relative_error", worst);
    r.metric("second_derivative_violations", static_cast<std::int64_t>(violations));
    r.metric("second_derivative_max_ratio", ratio);
    r.verdict = verdict_of(worst <= rel_tol && violations == 0);
    r.notes.push_back("order-0 worst rel err " + detail::sci(worst) + "; 8M/sqrt(r) violations " + std::to_string(violations) + "/" +
                      std::to_string(count) + " (max |I|/bound " + detail::sci(ratio) + ")");
  });
}

// ---------------------------------------------------------------- pipeline

struct PoissonGrid {
  std::vector<std::int64_t> ms{1, 2, 3};
  std::int64_t c_max = 10;
  std::vector<double> Ns{500, 1000, 2000};
  std::vector<double> ts{0, 100, 500};
};

inline SuiteResult poisson_suite(const PoissonGrid& g = {}, double tol = 1e-6, double tail_tol = 1e-8) {
  return detail::timed("poisson", 180.0, [&](SuiteResult& r) {
    r.columns = {"m", "c", "N", "t", "relative_gap", "quadrature_error", "tail_beyond_8ct_over_N", "nonpositive", "dual_terms", "verdict"};
    double gap = 0.0, tail = 0.0, tail_pos = 0.0;
    std::string worst_tail;
    for (double N : g.Ns)
      for (double t : g.ts)
        for (auto m : g.ms)
          for (std::int64_t c = 1; c <= g.c_max; ++c) {
            const auto p = poisson_check(m, c, N, t, tol);
            gap = std::max(gap, p.relative_gap);
            if (p.tail_beyond > tail) {
              tail = p.tail_beyond;
              worst_tail = "m=" + std::to_string(m) + " c=" + std::to_string(c) + " N=" + detail::sci(N) + " t=" + detail::sci(t);
            }
            if (t > 0) tail_pos = std::max(tail_pos, p.tail_beyond);
            const Verdict v = verdict_of(p.verdict == Verdict::pass && p.tail_beyond < tail_tol);
            r.rows.push_back({m, c, N, t, p.relative_gap, p.quadrature_error, p.tail_beyond, p.nonpositive,
                              static_cast<std::int64_t>(p.dual_terms), std::string(to_string(v))});
            r.count(v);
          }
    r.metric("relative_gap_max", gap);
    r.metric("tail_max", tail);
    r.metric("tail_max_positive_t", tail_pos);
    r.verdict = verdict_of(gap <= tol && tail < tail_tol);
    r.notes.push_back("max gap " + detail::sci(gap) + "; max tail " + detail::sci(tail) + " at " + worst_tail + "; max tail over t > 0 " +
                      detail::sci(tail_pos));
  });
}

inline SuiteResult j_decay_suite(const PipelineParams& p = PipelineParams::make(1e4, 1e3, 10.0, 100.0)) {
  return detail::timed("j-decay", 300.0, [&](SuiteResult& r) {
    r.columns = {"n1", "n2", "c1", "c2", "m", "abs_J", "abs_error"};
    const auto c1 = static_cast<std::int64_t>(std::ceil(p.Q));
    const std::int64_t n = stationary_index(p.ntilde() * 1.5, c1, p.N, p.t);
    bool ok = true;
    double A0 = 0.0, A1 = 0.0, far = 0.0;
    for (const JTuple q : {JTuple{n, n, c1, c1}, JTuple{n, n, c1, c1 + 1}}) {
      const auto d = j_decay_check(q, p);
      for (std::size_t i = 0; i < d.ms.size(); ++i)
        r.rows.push_back({q.n1, q.n2, q.c1, q.c2, d.ms[i], std::abs(d.values[i].value), d.values[i].abs_error});
      r.count(d.verdict);
      ok = ok && d.verdict == Verdict::pass;
      A0 = std::max(A0, d.A0);
      A1 = std::max(A1, d.A1);
      far = std::max(far, d.far_ratio);
      r.notes.push_back("(" + std::to_string(q.n1) + "," + std::to_string(q.n2) + "," + std::to_string(q.c1) + "," +
                        std::to_string(q.c2) + "): |J(0)| t = " + detail::sci(d.A0) + ", max |J(m)| tK = " + detail::sci(d.A1) +
                        ", |J(m)|/|J(0)| beyond 8N/K^2 " + detail::sci(d.near_ratio) +
                        ", beyond 16N/K^2 " + detail::sci(d.far_ratio) + ", octave trend " + (d.octave_trend ? "ok" : "broken") +
                        ", local " + detail::sci(d.local_violation));
    }
    r.metric("A0", A0);
    r.metric("A1", A1);
    r.metric("far_ratio", far);
    r.verdict = verdict_of(ok);
  });
}

inline SuiteResult assembly_suite(const PipelineParams& p = PipelineParams::make(1e4, 1e3, 10.0, 100.0), const AssemblyGrid& g = {}) {
  return detail::timed("assembly", 0.0, [&](SuiteResult& r) {
    const auto a = offdiagonal_assembly(p, g);
    r.columns = {"quantity", "value"};
    const std::vector<std::pair<std::string, double>> q = {
        {"live_pairs", static_cast<double>(a.live_pairs)},
        {"diagonal", a.diagonal},
        {"diagonal_scale", a.diagonal_scale},
        {"diagonal_ratio", a.diagonal_ratio},
        {"offdiag_as_written", a.offdiag_as_written},
        {"offdiag_single_denominator", a.offdiag_single},
        {"offdiag_scale", a.offdiag_scale},
        {"offdiag_ratio_as_written", a.offdiag_ratio},
        {"offdiag_ratio_single_denominator", a.offdiag_single_ratio},
        {"offdiag_terms", static_cast<double>(a.offdiag_terms)},
        {"indicator_hits", static_cast<double>(a.indicator_hits)},
        {"indicator_predicted", a.indicator_predicted},
        {"sparsity_ratio", a.sparsity_ratio}};
    for (const auto& [k, v] : q) {
      r.rows.push_back({k, v});
      r.metric(k, v);
    }
    r.count(a.verdict);
    r.verdict = a.verdict;
    r.notes.push_back("diagonal/(Ntilde/N) " + detail::sci(a.diagonal_ratio) + ", offdiag/(Ntilde t/(N K^3)) " +
                      detail::sci(a.offdiag_ratio) + " (single 1/(c1c2): " + detail::sci(a.offdiag_single_ratio) +
                      "), sparsity hits/predicted " + detail::sci(a.sparsity_ratio));
  });
}

// ---------------------------------------------------------------- L-values

struct LValueSuiteOptions {
  std::vector<double> balance_ts{0, 10, 100, 500};
  double scan_min = 100, scan_max = 1000, scan_step = 0.5;
  unsigned parallelism = 1;
};

inline SuiteResult lvalue_suite(const LValueSuiteOptions& o = {}) {
  return detail::timed("lvalue", 600.0, [&](SuiteResult& r) {
    r.columns = {"check", "t", "measured", "threshold"};
    const double t_top = std::max(o.scan_max, *std::max_element(o.balance_ts.begin(), o.balance_ts.end()));
    const auto spec = delta_spec(required_length(delta_spec(16), t_top, 2.0) + 64);
    bool ok = true;
    double bal = 0.0, conj = 0.0;
    for (double t : o.balance_ts) {
      const auto ref = central_value(spec, t, 1.0).estimate.value;
      double worst = 0.0;
      for (double b : {0.5, 2.0, kBalanceLow, kBalanceHigh})
        worst = std::max(worst, std::abs(central_value(spec, t, b).estimate.value - ref) / std::max(1.0, std::abs(ref)));
      const double cj = std::abs(central_value(spec, -t, 1.0).estimate.value - std::conj(ref));
      bal = std::max(bal, worst);
      conj = std::max(conj, cj);
      r.rows.push_back({std::string("balance"), t, worst, 1e-6});
      r.rows.push_back({std::string("conjugate"), t, cj, 1e-9});
      r.count(verdict_of(worst <= 1e-6));
      r.count(verdict_of(cj <= 1e-9));
    }
    ok = bal <= 1e-6 && conj <= 1e-9;
    const auto recs = exponent_scan(spec, o.scan_min, o.scan_max, o.scan_step, o.parallelism);
    double gap = 0.0;
    for (const auto& rec : recs) gap = std::max(gap, rec.consistency_gap);
    const auto s = summarize_scan(recs);
    r.rows.push_back({std::string("scan max gap"), o.scan_max, gap, 1e-6});
    r.count(verdict_of(gap <= 1e-6));
    ok = ok && gap <= 1e-6 && s.rejected == 0;
    r.metric("balance_max", bal);
    r.metric("conjugate_max", conj);
    r.metric("scan_points", static_cast<std::int64_t>(recs.size()));
    r.metric("scan_gap_max", gap);
    if (s.slope) r.metric("peak_exponent", *s.slope);
    r.metric("max_convexity_ratio", s.max_convexity_ratio);
    r.metric("max_weyl_ratio", s.max_weyl_ratio);
    r.verdict = verdict_of(ok);
    r.notes.push_back("balance " + detail::sci(bal) + ", conjugation " + detail::sci(conj) + ", scan " + std::to_string(recs.size()) +
                      " points max gap " + detail::sci(gap) + ", peak exponent " + (s.slope ? detail::sci(*s.slope) : "n/a") +
                      " (reported)");
  });
}

inline SuiteResult coefficient_suite(std::size_t X = 10000) {
  return detail::timed("coefficients", 30.0, [&](SuiteResult& r) {
    const auto rep = coefficient_bound_report(delta_eigenform(X), X);
    r.columns = {"x", "rankin_selberg_ratio"};
    for (const auto& [x, v] : rep.rankin_selberg) r.rows.push_back({static_cast<std::int64_t>(x), v});
    r.count(verdict_of(rep.deligne_ok));
    r.count(verdict_of(rep.rs_ok));
    r.metric("max_deligne_ratio", rep.max_deligne_ratio);
    r.metric("argmax", static_cast<std::int64_t>(rep.argmax));
    r.metric("rs_min", rep.rs_min);
    r.metric("rs_max", rep.rs_max);
    r.verdict = verdict_of(rep.deligne_ok && rep.rs_ok);
    r.notes.push_back("Deligne ratio " + detail::sci(rep.max_deligne_ratio) + " at n=" + std::to_string(rep.argmax) +
                      "; Rankin-Selberg ratio in [" + detail::sci(rep.rs_min) + ", " + detail::sci(rep.rs_max) + "]");
  });
}

// ---------------------------------------------------------------- command-line sweeps

/// Weil bound |S(m,n;c)| <= d(c) sqrt(gcd(m,n,c)) sqrt(c), symmetry, and the CRT
/// factorization, for every c <= c_max and 1 <= m, n <= mn_max.
inline SuiteResult kloosterman_suite(std::int64_t c_max = 60, std::int64_t mn_max = 10) {
  return detail::timed("kloosterman", 0.0, [&](SuiteResult& r) {
    r.columns = {"c", "cases", "max_weil_ratio", "max_crt_gap", "max_imaginary", "max_symmetry_gap"};
    double weil = 0.0, crt = 0.0;
    for (std::int64_t c = 1; c <= c_max; ++c) {
      const RootTable roots(c);
      const double dc = static_cast<double>(divisor_count(c));
      double w = 0.0, g = 0.0, im = 0.0, sym = 0.0;
      std::int64_t cases = 0;
      for (std::int64_t m = 1; m <= mn_max; ++m)
        for (std::int64_t n = 1; n <= mn_max; ++n) {
          const cplx S = kloosterman(m, n, c, roots);
          const double bound = dc * std::sqrt(static_cast<double>(gcd(gcd(m, n), c))) * std::sqrt(static_cast<double>(c));
          w = std::max(w, std::abs(S) / bound);
          g = std::max(g, std::abs(S - kloosterman_crt(m, n, c)));
          im = std::max(im, std::abs(S.imag()));
          sym = std::max(sym, std::abs(S - kloosterman(n, m, c, roots)));
          ++cases;
        }
      weil = std::max(weil, w);
      crt = std::max(crt, std::max(g, std::max(im, sym)));
      r.rows.push_back({c, cases, w, g, im, sym});
      r.count(verdict_of(w <= 1.0 + 1e-9 && g <= 1e-9 && im <= 1e-9 && sym <= 1e-9));
    }
    r.metric("max_weil_ratio", weil);
    r.metric("max_identity_gap", crt);
    r.verdict = verdict_of(r.failed == 0);
    r.notes.push_back("Weil ratio max " + detail::sci(weil) + ", CRT/symmetry/reality gap max " + detail::sci(crt));
  });
}

/// Petersson Delta_k(m, n) on the m, n <= grid square: exact cancellation when
/// S_k = 0, otherwise the spectral consistency report.
inline SuiteResult petersson_grid_suite(int k, int grid, double tol) {
  return detail::timed("petersson", 0.0, [&](SuiteResult& r) {
    const auto t = trace_consistency(k, grid, tol);
    r.columns = {"m", "n", "delta"};
    for (int m = 1; m <= grid; ++m)
      for (int n = 1; n <= grid; ++n)
        r.rows.push_back({static_cast<std::int64_t>(m), static_cast<std::int64_t>(n),
                          t.delta[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(n - 1)]});
    r.metric("dimension", static_cast<std::int64_t>(t.dim));
    r.metric("pairs", static_cast<std::int64_t>(grid * grid));
    r.metric("max_abs", t.max_abs);
    r.metric("symmetry_residual", t.symmetry_residual);
    if (t.dim == 1) {
      r.metric("singular_ratio", t.singular_ratio);
      r.metric("lambda_error", t.lambda_error);
    } else if (t.dim == 2) {
      r.metric("residual", t.residual);
    }
    r.count(t.verdict);
    r.verdict = t.verdict;
    r.notes.push_back("k=" + std::to_string(k) + " dim " + std::to_string(t.dim) + " on " + std::to_string(grid * grid) +
                      " pairs, max|Delta| " + detail::sci(t.max_abs));
  });
}

/// Central values at each t for several balances; the spread is the gated check.
inline SuiteResult afe_suite(const LFunctionSpec& spec, const std::vector<double>& ts, const std::vector<double>& balances,
                             double tol = 1e-6) {
  return detail::timed("afe", 0.0, [&](SuiteResult& r) {
    r.columns = {"t", "balance", "re", "im", "abs_error", "afe_length", "spread"};
    double worst = 0.0;
    for (double t : ts) {
      std::vector<CentralValue> vals;
      for (double b : balances) vals.push_back(central_value(spec, t, b));
      double spread = 0.0;
      for (const auto& v : vals)
        spread = std::max(spread, std::abs(v.estimate.value - vals.front().estimate.value) /
                                      std::max(1.0, std::abs(vals.front().estimate.value)));
      worst = std::max(worst, spread);
      for (std::size_t i = 0; i < vals.size(); ++i)
        r.rows.push_back({t, balances[i], vals[i].estimate.value.real(), vals[i].estimate.value.imag(), vals[i].estimate.abs_error,
                          static_cast<std::int64_t>(vals[i].afe_length), spread});
      r.count(verdict_of(spread <= tol));
    }
    r.metric("max_balance_spread", worst);
    r.verdict = verdict_of(r.failed == 0);
    r.notes.push_back(spec.name + ": max balance spread " + detail::sci(worst));
  });
}

inline SuiteResult scan_suite(const std::vector<ScanRecord>& recs) {
  return detail::timed("scan", 0.0, [&](SuiteResult& r) {
    r.columns = {"t", "modulus", "afe_length", "consistency_gap", "convexity_ratio", "weyl_ratio", "accepted"};
    for (const auto& x : recs)
      r.rows.push_back({x.t, x.modulus, static_cast<std::int64_t>(x.afe_length), x.consistency_gap, x.convexity_ratio, x.weyl_ratio,
                        std::string(x.accepted ? "true" : "false")});
    const auto s = summarize_scan(recs);
    r.metric("records", static_cast<std::int64_t>(s.records));
    r.metric("rejected", static_cast<std::int64_t>(s.rejected));
    r.metric("max_convexity_ratio", s.max_convexity_ratio);
    r.metric("max_weyl_ratio", s.max_weyl_ratio);
    if (s.slope) r.metric("peak_exponent", *s.slope);
    r.metric("peaks_used", static_cast<std::int64_t>(s.peaks_used));
    for (const auto& x : recs) r.count(verdict_of(x.accepted));
    r.verdict = verdict_of(s.rejected == 0);
    r.notes.push_back(std::to_string(s.records) + " records, " + std::to_string(s.rejected) + " above the consistency gate" +
                      (s.slope ? ", peak exponent " + detail::sci(*s.slope) + " (reported)" : std::string()));
  });
}

// ---------------------------------------------------------------- acceptance

inline constexpr int kCriteria = 10;

inline std::string criterion_title(int id) {
  static const char* titles[] = {"exact character sums",  "twisted factorization", "odd-character average", "Petersson formula",
                                 "Bessel k-sum identity", "stationary phase",      "Poisson identity", "J decay",
                                 "L-values and scan",     "coefficient bounds"};
  if (id < 1 || id > kCriteria) throw std::out_of_range("criterion id must be in 1..10");
  return titles[id - 1];
}

inline SuiteResult run_criterion(int id, unsigned parallelism = 1) {
  switch (id) {
    case 1: return charsum_suite();
    case 2: return twisted_factorization_suite();
    case 3: return average_convention_suite();
    case 4: return petersson_suite();
    case 5: return besselsum_suite();
    case 6: return stationary_phase_suite();
    case 7: return poisson_suite();
    case 8: return j_decay_suite();
    case 9: {
      LValueSuiteOptions o;
      o.parallelism = parallelism;
      return lvalue_suite(o);
    }
    case 10: return coefficient_suite();
    default: throw std::out_of_range("criterion id must be in 1..10");
  }
}

inline std::string criterion_line(int id, const SuiteResult& r) {
  std::string s = "criterion " + std::to_string(id) + " " + std::string(to_string(r.verdict)) + "  " + criterion_title(id) + ": ";
  for (std::size_t i = 0; i < r.notes.size(); ++i) s += (i ? "; " : "") + r.notes[i];
  char buf[48];
  std::snprintf(buf, sizeof buf, " [%.1f s]", r.seconds);
  return s + buf;
}

}  // namespace weylcheck
