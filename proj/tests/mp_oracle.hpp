#pragma once

// Extended-precision references built on MPFR, used only by tests.

#include <mpfr.h>

#include <complex>
#include <vector>

namespace oracle {

class Real {
 public:
  explicit Real(mpfr_prec_t bits = 256) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real& operator=(const Real& o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double d() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

/// J_n(x) correctly rounded to double.
inline double bessel_j(long n, double x) {
  Real a(256), r(256);
  mpfr_set_d(a.get(), x, MPFR_RNDN);
  mpfr_jn(r.get(), n, a.get(), MPFR_RNDN);
  return r.d();
}

/// Complex log Gamma from Stirling's series after shifting to |z| > 400,
/// carried out in 320-bit arithmetic; imaginary part wrapped to (-pi, pi].
inline std::complex<double> log_gamma(std::complex<double> s) {
  const mpfr_prec_t bits = 320;
  Real zr(bits), zi(bits), sr(bits), si(bits), tmp(bits), tmp2(bits), lr(bits), li(bits);
  mpfr_set_d(zr.get(), s.real(), MPFR_RNDN);
  mpfr_set_d(zi.get(), s.imag(), MPFR_RNDN);
  // accumulated sum of log(z + j) for the shift
  auto add_log = [&](Real& accr, Real& acci, const Real& xr, const Real& xi) {
    mpfr_hypot(tmp.get(), xr.get(), xi.get(), MPFR_RNDN);
    mpfr_log(tmp.get(), tmp.get(), MPFR_RNDN);
    mpfr_add(accr.get(), accr.get(), tmp.get(), MPFR_RNDN);
    mpfr_atan2(tmp.get(), xi.get(), xr.get(), MPFR_RNDN);
    mpfr_add(acci.get(), acci.get(), tmp.get(), MPFR_RNDN);
  };
  while (std::hypot(mpfr_get_d(zr.get(), MPFR_RNDN), mpfr_get_d(zi.get(), MPFR_RNDN)) < 400.0) {
    add_log(sr, si, zr, zi);
    mpfr_add_ui(zr.get(), zr.get(), 1, MPFR_RNDN);
  }
  // (z - 1/2) log z - z + log(2 pi)/2 + sum B_{2j} / (2j (2j-1) z^{2j-1})
  Real logr(bits), logi(bits);
  mpfr_hypot(logr.get(), zr.get(), zi.get(), MPFR_RNDN);
  mpfr_log(logr.get(), logr.get(), MPFR_RNDN);
  mpfr_atan2(logi.get(), zi.get(), zr.get(), MPFR_RNDN);
  Real ar(bits), ai(bits);
  mpfr_sub_d(tmp.get(), zr.get(), 0.5, MPFR_RNDN);
  // (tmp + i zi)(logr + i logi)
  mpfr_mul(ar.get(), tmp.get(), logr.get(), MPFR_RNDN);
  mpfr_mul(tmp2.get(), zi.get(), logi.get(), MPFR_RNDN);
  mpfr_sub(ar.get(), ar.get(), tmp2.get(), MPFR_RNDN);
  mpfr_mul(ai.get(), tmp.get(), logi.get(), MPFR_RNDN);
  mpfr_mul(tmp2.get(), zi.get(), logr.get(), MPFR_RNDN);
  mpfr_add(ai.get(), ai.get(), tmp2.get(), MPFR_RNDN);
  mpfr_sub(ar.get(), ar.get(), zr.get(), MPFR_RNDN);
  mpfr_sub(ai.get(), ai.get(), zi.get(), MPFR_RNDN);
  mpfr_const_pi(tmp.get(), MPFR_RNDN);
  mpfr_mul_ui(tmp.get(), tmp.get(), 2, MPFR_RNDN);
  mpfr_log(tmp.get(), tmp.get(), MPFR_RNDN);
  mpfr_div_ui(tmp.get(), tmp.get(), 2, MPFR_RNDN);
  mpfr_add(ar.get(), ar.get(), tmp.get(), MPFR_RNDN);
  // 1/z
  Real wr(bits), wi(bits), nrm(bits);
  mpfr_sqr(nrm.get(), zr.get(), MPFR_RNDN);
  mpfr_sqr(tmp.get(), zi.get(), MPFR_RNDN);
  mpfr_add(nrm.get(), nrm.get(), tmp.get(), MPFR_RNDN);
  mpfr_div(wr.get(), zr.get(), nrm.get(), MPFR_RNDN);
  mpfr_div(wi.get(), zi.get(), nrm.get(), MPFR_RNDN);
  mpfr_neg(wi.get(), wi.get(), MPFR_RNDN);
  Real w2r(bits), w2i(bits);
  mpfr_sqr(w2r.get(), wr.get(), MPFR_RNDN);
  mpfr_sqr(tmp.get(), wi.get(), MPFR_RNDN);
  mpfr_sub(w2r.get(), w2r.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul(w2i.get(), wr.get(), wi.get(), MPFR_RNDN);
  mpfr_mul_ui(w2i.get(), w2i.get(), 2, MPFR_RNDN);
  // Bernoulli numbers B_2..B_20 as exact fractions
  const long num[] = {1, -1, 1, -1, 5, -691, 7, -3617, 43867, -174611};
  const long den[] = {6, 30, 42, 30, 66, 2730, 6, 510, 798, 330};
  Real pr(bits), pi(bits);
  mpfr_set(pr.get(), wr.get(), MPFR_RNDN);
  mpfr_set(pi.get(), wi.get(), MPFR_RNDN);
  for (int j = 1; j <= 10; ++j) {
    mpfr_set_si(tmp.get(), num[j - 1], MPFR_RNDN);
    mpfr_div_si(tmp.get(), tmp.get(), den[j - 1] * (2L * j) * (2L * j - 1), MPFR_RNDN);
    mpfr_mul(tmp2.get(), tmp.get(), pr.get(), MPFR_RNDN);
    mpfr_add(ar.get(), ar.get(), tmp2.get(), MPFR_RNDN);
    mpfr_mul(tmp2.get(), tmp.get(), pi.get(), MPFR_RNDN);
    mpfr_add(ai.get(), ai.get(), tmp2.get(), MPFR_RNDN);
    // p *= w^2
    Real nr(bits), ni(bits);
    mpfr_mul(nr.get(), pr.get(), w2r.get(), MPFR_RNDN);
    mpfr_mul(tmp2.get(), pi.get(), w2i.get(), MPFR_RNDN);
    mpfr_sub(nr.get(), nr.get(), tmp2.get(), MPFR_RNDN);
    mpfr_mul(ni.get(), pr.get(), w2i.get(), MPFR_RNDN);
    mpfr_mul(tmp2.get(), pi.get(), w2r.get(), MPFR_RNDN);
    mpfr_add(ni.get(), ni.get(), tmp2.get(), MPFR_RNDN);
    pr = nr;
    pi = ni;
  }
  mpfr_sub(ar.get(), ar.get(), sr.get(), MPFR_RNDN);
  mpfr_sub(ai.get(), ai.get(), si.get(), MPFR_RNDN);
  // wrap imaginary part
  Real twopi(bits);
  mpfr_const_pi(twopi.get(), MPFR_RNDN);
  mpfr_mul_ui(twopi.get(), twopi.get(), 2, MPFR_RNDN);
  mpfr_remainder(ai.get(), ai.get(), twopi.get(), MPFR_RNDN);
  return {ar.d(), ai.d()};
}

}  // namespace oracle
