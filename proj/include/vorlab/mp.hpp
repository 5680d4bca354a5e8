#pragma once

// Thin RAII layer over MPFR used by the special-function kernels when the
// ascending Bessel series cancels past what double / __float128 can absorb.
// Not a general bignum library: only the operations the series evaluators
// and the complex log-gamma need.

#include <mpfr.h>

#include <string>
#include <utility>

namespace vorlab::mp {

// Scoped override of the MPFR thread-default precision (new Real objects
// pick it up).
class PrecGuard {
 public:
  explicit PrecGuard(mpfr_prec_t p) : old_(mpfr_get_default_prec()) {
    mpfr_set_default_prec(p);
  }
  ~PrecGuard() { mpfr_set_default_prec(old_); }
  PrecGuard(const PrecGuard&) = delete;
  PrecGuard& operator=(const PrecGuard&) = delete;

 private:
  mpfr_prec_t old_;
};

class Real {
 public:
  Real() { mpfr_init(v_); mpfr_set_zero(v_, 1); }
  Real(double x) { mpfr_init(v_); mpfr_set_d(v_, x, MPFR_RNDN); }  // NOLINT
  Real(long x) { mpfr_init(v_); mpfr_set_si(v_, x, MPFR_RNDN); }   // NOLINT
  Real(int x) { mpfr_init(v_); mpfr_set_si(v_, x, MPFR_RNDN); }    // NOLINT
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_); }
  int sign() const { return mpfr_sgn(v_); }

  friend Real operator+(const Real& a, const Real& b) {
    Real r = make_like(a, b);
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r = make_like(a, b);
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r = make_like(a, b);
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r = make_like(a, b);
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }
  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

 private:
  static Real make_like(const Real& a, const Real& b) {
    Real r;
    mpfr_prec_t p = std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
    mpfr_set_prec(r.v_, p);
    return r;
  }
  mpfr_t v_;
};

inline Real abs(const Real& a) {
  Real r(a);
  mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline Real sqrt(const Real& a) {
  Real r(a);
  mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline Real exp(const Real& a) {
  Real r(a);
  mpfr_exp(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline Real log(const Real& a) {
  Real r(a);
  mpfr_log(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline Real sin(const Real& a) {
  Real r(a);
  mpfr_sin(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline Real cos(const Real& a) {
  Real r(a);
  mpfr_cos(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline Real atan2(const Real& y, const Real& x) {
  Real r(y);
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}
inline Real sinh(const Real& a) {
  Real r(a);
  mpfr_sinh(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline Real pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

struct Complex {
  Real re, im;

  Complex() = default;
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r, double i = 0.0) : re(r), im(i) {}

  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  Complex operator-() const { return {-re, -im}; }
};

inline Real abs(const Complex& z) {
  Real r(z.re);
  mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
  return r;
}
inline Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}
inline Complex log(const Complex& z) {
  return {log(abs(z)), atan2(z.im, z.re)};
}

// Gamma(z) for complex z with Re z > 0: Stirling series after an upward
// argument shift, Bernoulli coefficients generated exactly on demand.
Complex gamma_complex(const Complex& z, mpfr_prec_t prec);

}  // namespace vorlab::mp
