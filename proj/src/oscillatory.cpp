#include "vorlab/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "vorlab/errors.hpp"

namespace vorlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

struct GlNode {
  double x, w;
};
constexpr GlNode kGl15[15] = {
    {-0.98799251802048542849, 0.0307532419961172683546},
    {-0.937273392400705904308, 0.0703660474881081247093},
    {-0.848206583410427216201, 0.107159220467171935012},
    {-0.724417731360170047416, 0.139570677926154314448},
    {-0.570972172608538847537, 0.166269205816993933553},
    {-0.394151347077563369897, 0.186161000015562211027},
    {-0.201194093997434522301, 0.198431485327111576456},
    {0.0, 0.202578241925561272881},
    {0.201194093997434522301, 0.198431485327111576456},
    {0.394151347077563369897, 0.186161000015562211027},
    {0.570972172608538847537, 0.166269205816993933553},
    {0.724417731360170047416, 0.139570677926154314448},
    {0.848206583410427216201, 0.107159220467171935012},
    {0.937273392400705904308, 0.0703660474881081247093},
    {0.98799251802048542849, 0.0307532419961172683546},
};

struct Integrand {
  const PhaseSpec& phase;
  const WeightFn& window;

  std::complex<double> operator()(double x, double* phase_mag) const {
    double ph = phase.f(x) + phase.alpha * x;
    if (phase_mag != nullptr) *phase_mag = std::max(*phase_mag, std::fabs(ph));
    double w = window ? window(x) : 1.0;
    if (w == 0.0) return {0.0, 0.0};
    std::complex<double> amp = phase.g ? phase.g(x) : std::complex<double>(1.0, 0.0);
    double ang = kTwoPi * ph;
    return amp * w * std::complex<double>(std::cos(ang), std::sin(ang));
  }
};

struct GlOut {
  std::complex<double> value;
  double mass = 0.0;       // integral of |w_i h_i|, the roundoff scale
  double phase_mag = 0.0;  // largest |phase| seen, which degrades e(phase)
};

GlOut gl15(const Integrand& h, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  GlOut out;
  std::complex<double> s(0.0, 0.0);
  double m = 0.0;
  for (const auto& n : kGl15) {
    std::complex<double> v = h(c + r * n.x, &out.phase_mag);
    s += n.w * v;
    m += n.w * std::abs(v);
  }
  out.value = r * s;
  out.mass = std::fabs(r) * m;
  return out;
}

}  // namespace

std::complex<double> quad_oscillatory(const PhaseSpec& phase, const WeightFn& window,
                                      double a, double b, double tol) {
  if (!(a < b)) throw DomainError("quad_oscillatory: need a < b");
  if (!(tol > 0.0)) throw DomainError("quad_oscillatory: need tol > 0");
  Integrand h{phase, window};

  struct Seg {
    double a, b;
    GlOut whole;
    bool have_whole;
  };
  std::vector<Seg> stack;
  stack.push_back({a, b, {}, false});

  std::complex<double> total(0.0, 0.0);
  long panels = 0;
  const long budget = 4000000;
  const double len_total = b - a;

  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    if (++panels > budget) {
      throw QuadratureBudgetError("quad_oscillatory: panel budget exhausted");
    }
    const double len = s.b - s.a;
    // Oscillation-aware cap: a panel spans at most a quarter of the local
    // wavelength.
    double osc = 0.0;
    for (double x : {s.a, 0.5 * (s.a + s.b), s.b}) {
      osc = std::max(osc, std::fabs(phase.fp(x) + phase.alpha));
    }
    const double cap = 0.25 / std::max(osc, 1e-300);
    if (len > cap && len > 1e-12 * len_total) {
      double m = 0.5 * (s.a + s.b);
      stack.push_back({m, s.b, {0.0, 0.0}, false});
      stack.push_back({s.a, m, {0.0, 0.0}, false});
      continue;
    }
    GlOut whole = s.have_whole ? s.whole : gl15(h, s.a, s.b);
    double m = 0.5 * (s.a + s.b);
    GlOut left = gl15(h, s.a, m);
    GlOut right = gl15(h, m, s.b);
    std::complex<double> sum2 = left.value + right.value;
    double err = std::abs(sum2 - whole.value);
    // Second term: the integrand's own roundoff floor.  e(phase) carries a
    // relative noise of order eps * |phase|, so panels cannot meaningfully
    // refine below it and would otherwise split forever.
    double noise_scale = 1.0 + kTwoPi * std::max(whole.phase_mag,
                                                 std::max(left.phase_mag, right.phase_mag));
    double accept = tol * std::max(len / len_total, 1e-9) +
                    5e-15 * noise_scale * (whole.mass + left.mass + right.mass);
    if (err <= accept || len < 1e-13 * len_total) {
      total += sum2;
    } else {
      stack.push_back({m, s.b, right, true});
      stack.push_back({s.a, m, left, true});
    }
  }
  return total;
}

SaddleResult saddle_point_eval(const PhaseSpec& phase, const SmoothWindow& window) {
  const double m1 = window.m1, m2 = window.m2;
  auto dtotal = [&](double x) { return phase.fp(x) + phase.alpha; };
  double fa = dtotal(m1), fb = dtotal(m2);
  if (fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0)) {
    throw NoSaddleError("saddle_point_eval: f' + alpha has no sign change");
  }

  // Bisection to relative width 1e-13, then two Newton steps (f'' > 0 keeps
  // the bracket honest).
  double lo = m1, hi = m2;
  bool rising = fb > 0.0;
  while (hi - lo > 1e-13 * m1) {
    double mid = 0.5 * (lo + hi);
    double v = dtotal(mid);
    if ((v > 0.0) == rising) hi = mid;
    else lo = mid;
  }
  double x0 = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    double d = dtotal(x0), dd = phase.fpp(x0);
    if (dd != 0.0) {
      double step = d / dd;
      double nx = x0 - step;
      if (nx > m1 && nx < m2) x0 = nx;
    }
  }

  SaddleResult out;
  out.x0 = x0;
  const double fpp0 = phase.fpp(x0);
  if (!(fpp0 > 0.0)) throw DomainError("saddle_point_eval: f''(x0) must be positive");
  out.xi = xi_eval(window, fpp0, x0);
  std::complex<double> amp = phase.g ? phase.g(x0) : std::complex<double>(1.0, 0.0);
  double ang = kTwoPi * (phase.f(x0) + phase.alpha * x0) + kPi / 4.0;
  out.main_term = out.xi * amp / std::sqrt(fpp0) *
                  std::complex<double>(std::cos(ang), std::sin(ang));

  const double A = out.decay_constant;  // = 1
  const double G = phase.amp_bound, F = phase.phase_scale, mu = phase.mu;
  const double U = window.u;
  const int J = window.j;
  const double len = m2 - m1;

  const double ratio_pow = std::exp(J * std::log(mu / U));
  out.e1 = len * (1.0 + ratio_pow) * G * std::exp(-A * std::fabs(phase.alpha) * mu - A * F);

  const bool in_ramp = (x0 <= m1 + J * U) || (x0 >= m2 - J * U);
  out.e2 = (1.0 + (in_ramp ? std::sqrt(F) : 0.0)) * G * mu * std::pow(F, -1.5);

  auto ej = [&](double x) {
    double den = std::fabs(dtotal(x)) + std::sqrt(std::max(phase.fpp(x), 0.0));
    return G / std::pow(den, J + 1);
  };
  double e3 = 0.0;
  for (int j = 0; j <= J; ++j) {
    e3 += ej(m1 + j * U) + ej(m2 - j * U);
  }
  out.e3 = e3 * std::exp(-J * std::log(U));
  out.error_budget = out.e1 + out.e2 + out.e3;
  return out;
}

double no_saddle_bound(const PhaseSpec& phase, const SmoothWindow& window) {
  const double m1 = window.m1, m2 = window.m2;
  auto dtotal = [&](double x) { return phase.fp(x) + phase.alpha; };
  const int kProbe = 64;
  double first = dtotal(m1);
  for (int i = 1; i <= kProbe; ++i) {
    double x = m1 + (m2 - m1) * i / kProbe;
    if ((dtotal(x) > 0.0) != (first > 0.0)) {
      throw SaddlePresentError("no_saddle_bound: f' + alpha changes sign");
    }
  }
  const double G = phase.amp_bound, F = phase.phase_scale, mu = phase.mu;
  const double U = window.u;
  const int J = window.j;
  const double A = 1.0;
  double t1 = std::exp(-J * std::log(U)) * G * std::exp((J + 1) * std::log(mu / F));
  double t2 = (std::exp(J * std::log(mu) - (J - 1) * std::log(U)) + (m2 - m1)) * G *
              std::exp(-A * F);
  return t1 + t2;
}

double analytic_bounds(BoundKind kind, const BoundParams& params) {
  switch (kind) {
    case BoundKind::kFirstDerivative:
      if (!(params.lambda > 0.0)) throw DomainError("first derivative test: need lambda > 0");
      return params.g0 / params.lambda + params.total_var_g / params.lambda;
    case BoundKind::kSecondDerivative:
      if (!(params.lambda > 0.0)) throw DomainError("second derivative test: need lambda > 0");
      return params.g0 / std::sqrt(params.lambda) +
             params.total_var_g / std::sqrt(params.lambda);
    case BoundKind::kJutilaMotohashi: {
      if (!(params.f1 > 0.0)) throw DomainError("smooth-cutoff bound: need F1 > 0");
      double b = params.g0 * std::exp(-params.p * std::log(params.g1 * params.f1)) *
                 std::pow(1.0 + params.g1 / params.mu, params.p) * (params.m2 - params.m1);
      return b;
    }
  }
  throw DomainError("analytic_bounds: unknown kind");
}

}  // namespace vorlab
