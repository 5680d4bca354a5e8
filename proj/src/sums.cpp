#include "vorlab/sums.hpp"

#include <cmath>
#include <numeric>

#include "vorlab/errors.hpp"

namespace vorlab {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

long mod_inverse(long a, long k) {
  if (k == 1) return 0;
  long r = ((a % k) + k) % k;
  long t0 = 0, t1 = 1, r0 = k, r1 = r;
  while (r1 != 0) {
    long q = r0 / r1;
    long tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
  }
  return ((t0 % k) + k) % k;
}

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

double phase_mod1(double n, double alpha) {
  double p = n * alpha;
  double e = std::fma(n, alpha, -p);  // exact low part of the product
  double f = std::fmod(p, 1.0) + e;   // fmod on doubles is exact
  if (f >= 1.0) f -= 1.0;
  if (f <= -1.0) f += 1.0;
  return f;
}

RationalApprox farey_approx(double alpha, long q_max) {
  if (q_max < 1) throw DomainError("farey_approx: q_max must be positive");
  // Continued-fraction convergents p/q; keep the last with q <= q_max.
  long p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
  long p1 = static_cast<long>(std::floor(alpha)), q1 = 1;
  double x = alpha - std::floor(alpha);
  for (int it = 0; it < 64; ++it) {
    if (x < 1e-18) break;
    double inv = 1.0 / x;
    double a_f = std::floor(inv);
    if (a_f > 9.0e18) break;
    long a = static_cast<long>(a_f);
    long p2 = a * p1 + p0;
    long q2 = a * q1 + q0;
    if (q2 > q_max || q2 < 0) break;  // q2 < 0 guards overflow
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    x = inv - a_f;
  }
  RationalApprox r;
  r.h = p1;
  r.k = q1;
  long g = std::gcd(std::labs(r.h), r.k);
  if (g > 1) {
    r.h /= g;
    r.k /= g;
  }
  r.eta = alpha - static_cast<double>(r.h) / static_cast<double>(r.k);
  r.hbar = mod_inverse(r.h, r.k);
  return r;
}

RationalApprox make_rational(long h, long k) {
  if (k < 1) throw DomainError("make_rational: k must be positive");
  long g = std::gcd(std::labs(h), k);
  if (g > 1) {
    h /= g;
    k /= g;
  }
  RationalApprox r;
  r.h = h;
  r.k = k;
  r.eta = 0.0;
  r.hbar = mod_inverse(h, k);
  return r;
}

std::complex<double> evaluate_sum(const CoefficientTable& table, const SumSpec& spec) {
  if (!(spec.delta >= 0.0)) throw DomainError("evaluate_sum: delta must be nonnegative");
  const double lo = spec.m;
  const double hi = spec.m + spec.delta;
  const long n0 = static_cast<long>(std::ceil(lo));
  const long n1 = static_cast<long>(std::floor(hi));
  if (n0 < 1 || n1 > table.n_max()) {
    throw RangeError("evaluate_sum: range [" + std::to_string(n0) + ", " +
                     std::to_string(n1) + "] outside the table");
  }
  const bool primed = spec.endpoint_rule == EndpointRule::kPrimed;
  const bool lo_integer = std::floor(lo) == lo;
  const bool hi_integer = std::floor(hi) == hi;

  Kahan re, im;
  // Unit-phase rotation with periodic exact resynchronization.
  constexpr long kResync = 64;
  const double c_step = std::cos(kTwoPi * phase_mod1(1.0, spec.alpha));
  const double s_step = std::sin(kTwoPi * phase_mod1(1.0, spec.alpha));
  double cr = 0.0, ci = 0.0;
  for (long n = n0; n <= n1; ++n) {
    if ((n - n0) % kResync == 0) {
      double ph = kTwoPi * phase_mod1(static_cast<double>(n), spec.alpha);
      cr = std::cos(ph);
      ci = std::sin(ph);
    }
    double w = table.coeff(n);
    if (spec.weight) w *= spec.weight(static_cast<double>(n));
    if (primed) {
      if ((lo_integer && n == n0) || (hi_integer && n == n1)) w *= 0.5;
    }
    re.add(w * cr);
    im.add(w * ci);
    double nr = cr * c_step - ci * s_step;
    ci = cr * s_step + ci * c_step;
    cr = nr;
  }
  return {re.s, im.s};
}

std::complex<double> twisted_long_sum(const CoefficientTable& table, double m,
                                      const RationalApprox& approx) {
  const long n1 = static_cast<long>(std::floor(m));
  if (n1 > table.n_max()) throw RangeError("twisted_long_sum: m exceeds the table");
  const long k = approx.k;
  // e(n h / k) is periodic mod k.
  std::vector<double> cs(static_cast<size_t>(k)), sn(static_cast<size_t>(k));
  for (long r = 0; r < k; ++r) {
    double ph = kTwoPi * static_cast<double>(r) / static_cast<double>(k);
    cs[static_cast<size_t>(r)] = std::cos(ph);
    sn[static_cast<size_t>(r)] = std::sin(ph);
  }
  const long hm = ((approx.h % k) + k) % k;
  Kahan re, im;
  long idx = 0;
  for (long n = 1; n <= n1; ++n) {
    idx += hm;
    if (idx >= k) idx -= k;
    double t = table.coeff(n);
    re.add(t * cs[static_cast<size_t>(idx)]);
    im.add(t * sn[static_cast<size_t>(idx)]);
  }
  return {re.s, im.s};
}

}  // namespace vorlab
