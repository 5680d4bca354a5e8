#include "vorlab/special_fn.hpp"

#include <quadmath.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>

#include "vorlab/errors.hpp"
#include "vorlab/mp.hpp"

namespace vorlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Scalar abstraction for the ascending series: double, __float128, mpfr.
// ---------------------------------------------------------------------------

struct OpsD {
  using R = double;
  static R from_double(double d) { return d; }
  static double to_double(R x) { return x; }
  static R log(R x) { return std::log(x); }
  static R sin(R x) { return std::sin(x); }
  static R cos(R x) { return std::cos(x); }
  static R fabs(R x) { return std::fabs(x); }
  static bool finite(R x) { return std::isfinite(x); }
  static R euler_gamma() { return 0.5772156649015328606; }
};

struct OpsQ {
  using R = __float128;
  static R from_double(double d) { return d; }
  static double to_double(R x) { return static_cast<double>(x); }
  static R log(R x) { return logq(x); }
  static R sin(R x) { return sinq(x); }
  static R cos(R x) { return cosq(x); }
  static R fabs(R x) { return fabsq(x); }
  static bool finite(R x) { return finiteq(x) != 0; }
  static R euler_gamma() {
    static const R g =
        strtoflt128("0.57721566490153286060651209008240243104215933594", nullptr);
    return g;
  }
};

struct OpsM {
  using R = mp::Real;  // precision from the thread default (PrecGuard)
  static R from_double(double d) { return mp::Real(d); }
  static double to_double(const R& x) { return x.to_double(); }
  static R log(const R& x) { return mp::log(x); }
  static R sin(const R& x) { return mp::sin(x); }
  static R cos(const R& x) { return mp::cos(x); }
  static R fabs(const R& x) { return mp::abs(x); }
  static bool finite(const R&) { return true; }
  static R euler_gamma() {
    R r;
    mpfr_const_euler(r.raw(), MPFR_RNDN);
    return r;
  }
};

// 1/Gamma(1 + 2 i kappa) at high precision, cached per kappa.
const mp::Complex& inv_gamma_one_plus(double kappa) {
  static std::mutex mu;
  static std::map<std::uint64_t, mp::Complex> cache;
  std::uint64_t key;
  std::memcpy(&key, &kappa, sizeof key);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const mpfr_prec_t prec = 768;
    mp::PrecGuard g(prec);
    mp::Complex z(mp::Real(1.0), mp::Real(2.0 * kappa));
    mp::Complex gam = mp::gamma_complex(z, prec);
    it = cache.emplace(key, mp::Complex(1.0, 0.0) / gam).first;
  }
  return it->second;
}

double mp_to_double_exact(const mp::Real& x) { return x.to_double(); }

__float128 mp_to_f128(const mp::Real& x) {
  mp::Real r(x);
  __float128 out = 0;
  for (int i = 0; i < 3; ++i) {
    double d = r.to_double();
    out += static_cast<__float128>(d);
    r -= mp::Real(d);
  }
  return out;
}

template <class Ops>
struct GammaInv {
  static void get(double kappa, typename Ops::R* re, typename Ops::R* im);
};
template <>
void GammaInv<OpsD>::get(double kappa, double* re, double* im) {
  const mp::Complex& g = inv_gamma_one_plus(kappa);
  *re = mp_to_double_exact(g.re);
  *im = mp_to_double_exact(g.im);
}
template <>
void GammaInv<OpsQ>::get(double kappa, __float128* re, __float128* im) {
  const mp::Complex& g = inv_gamma_one_plus(kappa);
  *re = mp_to_f128(g.re);
  *im = mp_to_f128(g.im);
}
template <>
void GammaInv<OpsM>::get(double kappa, mp::Real* re, mp::Real* im) {
  const mp::Complex& g = inv_gamma_one_plus(kappa);
  *re = g.re;
  *im = g.im;
}

// Ascending series  pref * sum_m s^m (x/2)^{2m} / (m! (1+nu)_m),  nu = 2 i kappa,
// pref = (x/2)^nu / Gamma(1+nu).  Returns Im of the product plus the measured
// cancellation ratio sum|t| / |Im result|.
template <class Ops>
detail::SeriesEval series_imag_impl(double kappa, double x, int sign, int prec_bits) {
  using R = typename Ops::R;
  const R half_x = Ops::from_double(x / 2.0);
  const R q = half_x * half_x;
  const R two_kappa = Ops::from_double(2.0 * kappa);
  const R s = Ops::from_double(static_cast<double>(sign));

  R sum_re = Ops::from_double(1.0), sum_im = Ops::from_double(0.0);
  R t_re = Ops::from_double(1.0), t_im = Ops::from_double(0.0);
  R sum_abs = Ops::from_double(1.0);

  const double xd = x;
  const int m_min = static_cast<int>(xd / 2.0 + 2.0 * kappa) + 8;
  const double log2_cut = -(static_cast<double>(prec_bits) + 16);

  int m = 1;
  for (; m < 100000; ++m) {
    const R md = Ops::from_double(static_cast<double>(m));
    // t *= s*q / (m (m + nu)) ;  m (m + nu) = m^2 + 2 i kappa m
    R a = md * md;
    R b = two_kappa * md;
    R d = a * a + b * b;
    R num_re = t_re * a + t_im * b;
    R num_im = t_im * a - t_re * b;
    R f = s * q / d;
    t_re = num_re * f;
    t_im = num_im * f;
    sum_re += t_re;
    sum_im += t_im;
    R tab = Ops::fabs(t_re) + Ops::fabs(t_im);
    sum_abs += tab;
    if (!Ops::finite(tab)) break;
    if (m > m_min) {
      double rel = Ops::to_double(tab) / Ops::to_double(sum_abs);
      if (rel == 0.0 || std::log2(rel) < log2_cut) break;
    }
  }

  // prefactor (x/2)^{2 i kappa} / Gamma(1 + 2 i kappa)
  R phase = two_kappa * Ops::log(half_x);
  R pc = Ops::cos(phase), ps = Ops::sin(phase);
  R g_re, g_im;
  GammaInv<Ops>::get(kappa, &g_re, &g_im);
  R p_re = pc * g_re - ps * g_im;
  R p_im = pc * g_im + ps * g_re;

  R value_im = p_re * sum_im + p_im * sum_re;
  R p_abs = Ops::fabs(p_re) + Ops::fabs(p_im);

  detail::SeriesEval out;
  out.imag_part = Ops::to_double(value_im);
  double denom = std::fabs(out.imag_part);
  double mass = Ops::to_double(sum_abs) * Ops::to_double(p_abs);
  out.cancellation = (denom > 0.0 && std::isfinite(mass)) ? mass / denom
                                                          : std::numeric_limits<double>::infinity();
  out.terms = m;
  out.precision_bits = prec_bits;
  return out;
}

// K_0 ascending series (the kappa = 0 limit needs its own expansion).
template <class Ops>
detail::SeriesEval k0_series_impl(double x, int prec_bits) {
  using R = typename Ops::R;
  const R half_x = Ops::from_double(x / 2.0);
  const R q = half_x * half_x;

  R i0 = Ops::from_double(1.0);
  R ksum = Ops::from_double(0.0);
  R t = Ops::from_double(1.0);
  R h = Ops::from_double(0.0);
  R sum_abs = Ops::from_double(1.0);
  const int m_min = static_cast<int>(x) + 8;
  const double log2_cut = -(static_cast<double>(prec_bits) + 16);

  int m = 1;
  for (; m < 100000; ++m) {
    const R md = Ops::from_double(static_cast<double>(m));
    t = t * q / (md * md);
    h += Ops::from_double(1.0) / md;
    i0 += t;
    ksum += t * h;
    R tab = Ops::fabs(t) * (Ops::from_double(1.0) + Ops::fabs(h));
    sum_abs += tab;
    if (!Ops::finite(tab)) break;
    if (m > m_min) {
      double rel = Ops::to_double(tab) / Ops::to_double(sum_abs);
      if (rel == 0.0 || std::log2(rel) < log2_cut) break;
    }
  }
  R lead = -(Ops::log(half_x) + Ops::euler_gamma());
  R value = lead * i0 + ksum;

  detail::SeriesEval out;
  out.imag_part = Ops::to_double(value);  // real value, reusing the field
  double mass = Ops::to_double(sum_abs) * std::fabs(Ops::to_double(lead) + 1.0);
  double denom = std::fabs(out.imag_part);
  out.cancellation = (denom > 0.0 && std::isfinite(mass)) ? mass / denom
                                                          : std::numeric_limits<double>::infinity();
  out.terms = m;
  out.precision_bits = prec_bits;
  return out;
}

// Escalate double -> float128 -> mpfr until the measured cancellation is
// absorbed with margin.
template <class Impl>
detail::SeriesEval escalate(double x, double kappa, Impl run) {
  const double growth = x + 3.2 * kappa;
  if (growth < 600.0) {
    detail::SeriesEval e = run(0, 53);
    if (std::isfinite(e.cancellation) && e.cancellation * 2.22e-16 * 16.0 < 1e-12) return e;
  }
  if (growth < 10000.0) {
    detail::SeriesEval e = run(1, 113);
    if (std::isfinite(e.cancellation) && e.cancellation * 1.93e-34 * 16.0 < 1e-14) {
      return e;
    }
    if (std::isfinite(e.cancellation)) {
      int prec = 64 + static_cast<int>(std::log2(e.cancellation)) + 64;
      return run(2, prec);
    }
  }
  int prec = 128 + static_cast<int>(1.45 * growth) + 64;
  detail::SeriesEval e = run(2, prec);
  if (!std::isfinite(e.cancellation)) {
    throw PrecisionError("bessel series failed to stabilize");
  }
  // One refinement pass if the estimate was too optimistic.
  double err = std::ldexp(e.cancellation, -(e.precision_bits - 5));
  if (err > 1e-18) {
    prec = 64 + static_cast<int>(std::log2(e.cancellation)) + 80;
    e = run(2, prec);
  }
  return e;
}

std::complex<double> asym_eval(const BesselAsymptotic& rec, double x) {
  const std::complex<double> s = hankel_correction(rec, x);
  const double theta = x - kPi / 4.0;
  const double amp = std::sqrt(2.0 / (kPi * x)) * 2.0 * std::sinh(kPi * rec.kappa);
  const double im = amp * (std::sin(theta) * s.real() + std::cos(theta) * s.imag());
  return {0.0, im};
}

const BesselAsymptotic& asymptotic_for(double kappa) {
  static std::mutex mu;
  static std::map<std::uint64_t, BesselAsymptotic> cache;
  std::uint64_t key;
  std::memcpy(&key, &kappa, sizeof key);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_bessel_asymptotic(kappa)).first;
  return it->second;
}

}  // namespace

namespace detail {
SeriesEval bessel_series_imag(double kappa, double x, int sign) {
  if (kappa == 0.0) return SeriesEval{0.0, 1.0, 0, 53};
  auto run = [&](int tier, int prec) -> SeriesEval {
    if (tier == 0) return series_imag_impl<OpsD>(kappa, x, sign, 53);
    if (tier == 1) return series_imag_impl<OpsQ>(kappa, x, sign, 113);
    mp::PrecGuard g(prec);
    return series_imag_impl<OpsM>(kappa, x, sign, prec);
  };
  return escalate(x, kappa, run);
}
}  // namespace detail

BesselAsymptotic make_bessel_asymptotic(double kappa, int order_terms) {
  if (kappa < 0.0) throw DomainError("kappa must be nonnegative");
  BesselAsymptotic rec;
  rec.kappa = kappa;
  rec.order_terms = order_terms;
  rec.crossover_x = std::max(30.0, 8.0 * kappa);
  rec.hankel.resize(order_terms + 1);
  rec.hankel[0] = 1.0;
  const double c = 16.0 * kappa * kappa;
  for (int l = 1; l <= order_terms; ++l) {
    const double odd = 2.0 * l - 1.0;
    rec.hankel[l] = rec.hankel[l - 1] * (-(c + odd * odd)) / (8.0 * l);
  }
  rec.c_plus.resize(order_terms);
  rec.c_minus.resize(order_terms);
  std::complex<double> il(1.0, 0.0);
  const std::complex<double> iu(0.0, 1.0);
  double fourpil = 1.0;
  for (int l = 1; l <= order_terms; ++l) {
    il *= iu;
    fourpil *= 4.0 * kPi;
    rec.c_plus[l - 1] = il * (rec.hankel[l] / fourpil);
    rec.c_minus[l - 1] = std::conj(rec.c_plus[l - 1]);
  }
  return rec;
}

std::complex<double> bessel_j_imag_diff(double kappa, double x, BesselMethod method) {
  if (!(x > 0.0)) throw DomainError("bessel_j_imag_diff: x must be positive");
  if (kappa < 0.0) throw DomainError("bessel_j_imag_diff: kappa must be nonnegative");
  if (kappa == 0.0) return {0.0, 0.0};

  const BesselAsymptotic& rec = asymptotic_for(kappa);
  bool use_series;
  switch (method) {
    case BesselMethod::kSeries: use_series = true; break;
    case BesselMethod::kAsymptotic: use_series = false; break;
    default: use_series = x < rec.crossover_x; break;
  }
  if (!use_series) return asym_eval(rec, x);
  detail::SeriesEval e = detail::bessel_series_imag(kappa, x, -1);
  return {0.0, 2.0 * e.imag_part};
}

double bessel_k_imag(double kappa, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k_imag: x must be positive");
  if (kappa < 0.0) throw DomainError("bessel_k_imag: kappa must be nonnegative");
  if (x > 730.0) return 0.0;  // below double underflow, exactly the regime K ~ e^{-x}

  if (kappa == 0.0) {
    auto run = [&](int tier, int prec) -> detail::SeriesEval {
      if (tier == 0) return k0_series_impl<OpsD>(x, 53);
      if (tier == 1) return k0_series_impl<OpsQ>(x, 113);
      mp::PrecGuard g(prec);
      return k0_series_impl<OpsM>(x, prec);
    };
    return escalate(2.0 * x, 0.0, run).imag_part;
  }

  detail::SeriesEval e = detail::bessel_series_imag(kappa, x, +1);
  // K_{2ik}(x) = -pi * Im I_{2ik}(x) / sinh(2 pi kappa)
  const double s = std::sinh(2.0 * kPi * kappa);
  return -kPi * e.imag_part / s;
}

double k_primitive_b2(double kappa) {
  if (kappa == 0.0) return 1.0 / (8.0 * kPi * kPi);
  return kappa / (8.0 * kPi * std::sinh(kPi * kappa));
}

std::complex<double> hankel_correction(const BesselAsymptotic& rec, double x) {
  // Truncate at the globally smallest term: the divergent tail first climbs
  // over an initial hump when 16 kappa^2 > 8 x, so a local-growth test would
  // stop far too early.
  const int count = static_cast<int>(rec.hankel.size());
  int stop = count - 1;
  {
    double xl = 1.0, best = std::numeric_limits<double>::infinity();
    for (int l = 0; l < count; ++l) {
      double mag = std::fabs(rec.hankel[l]) / xl;
      if (mag < best) {
        best = mag;
        stop = l;
        if (mag < 1e-19) break;
      }
      xl *= x;
    }
  }
  double p = 0.0, q = 0.0;  // S = p + i q
  double xl = 1.0;
  for (int l = 0; l <= stop; ++l) {
    double term = rec.hankel[l] / xl;
    switch (l & 3) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
    }
    xl *= x;
  }
  return {p, q};
}

JPrimitiveExpansion j_primitive_asymptotic(double kappa, long n, double x, long k,
                                           double regime_factor) {
  if (n < 1 || k < 1) throw DomainError("j_primitive_asymptotic: n, k must be positive");
  if (!(x > 0.0)) throw DomainError("j_primitive_asymptotic: x must be positive");
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  if (static_cast<double>(n) * x < regime_factor * kk) {
    throw RegimeError("j_primitive_asymptotic: n x below the asymptotic regime");
  }

  JPrimitiveExpansion out;
  const double snh = std::sinh(kPi * kappa);
  const double sq2 = std::sqrt(2.0);
  const double a1 = -(16.0 * kappa * kappa + 1.0) / 8.0;   // Hankel a_1(2 i kappa)
  const double a2 = (16.0 * kappa * kappa + 1.0) * (16.0 * kappa * kappa + 9.0) / 128.0;

  const std::complex<double> e_m8 = std::polar(1.0, -kPi / 4.0);  // e(-1/8)
  const double c1 = snh * sq2 / (8.0 * kPi * kPi);
  out.A1_plus = c1 * e_m8;
  out.A1_minus = std::conj(out.A1_plus);
  out.A2 = -kappa / (4.0 * kPi * kPi);
  const double c3 = -snh * sq2 * (0.5 + a1) / (16.0 * kPi * kPi * kPi);
  out.A3_plus = c3 * std::complex<double>(0.0, -0.5) * e_m8;
  out.A3_minus = std::conj(out.A3_plus);
  out.B2 = k_primitive_b2(kappa);

  const double X = 4.0 * kPi * std::sqrt(static_cast<double>(n) * x) / k;
  const double theta = X - kPi / 4.0;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);

  out.leading_term = 2.0 * c1 * std::cos(theta) * std::pow(kd, 1.5) *
                     std::pow(nd, -0.75) * std::pow(x, 0.25);
  out.constant_term = out.A2 * kk / nd;
  out.secondary_term = c3 * std::sin(theta) * std::pow(kd, 2.5) *
                       std::pow(nd, -1.25) * std::pow(x, -0.25);
  const double next_coeff =
      snh * sq2 * (0.75 + 0.5 * std::fabs(0.5 + a1) + std::fabs(a2)) / (64.0 * std::pow(kPi, 4));
  out.remainder_bound = 2.0 * next_coeff * std::pow(kd, 3.5) * std::pow(nd, -1.75) *
                        std::pow(x, -0.75);
  return out;
}

}  // namespace vorlab
