#include "vorlab/voronoi.hpp"

#include <algorithm>
#include <cmath>

#include "vorlab/errors.hpp"
#include "vorlab/runtime.hpp"

namespace vorlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

std::complex<double> unit(double cycles) {
  double a = kTwoPi * cycles;
  return {std::cos(a), std::sin(a)};
}

// e(r / k) for integer residue r, from a precomputed table.
struct RootTable {
  std::vector<std::complex<double>> e;
  explicit RootTable(long k) : e(static_cast<size_t>(k)) {
    for (long r = 0; r < k; ++r) {
      e[static_cast<size_t>(r)] = unit(static_cast<double>(r) / static_cast<double>(k));
    }
  }
  std::complex<double> operator()(long r, long k) const {
    long m = ((r % k) + k) % k;
    return e[static_cast<size_t>(m)];
  }
};

double table_sup(const CoefficientTable& t) {
  double mx = 0.0;
  for (long n = 1; n <= t.n_max(); ++n) mx = std::max(mx, std::fabs(t.coeff(n)));
  return mx;
}

// Integration-by-parts tail estimate for one dual term at phase frequency
// sqrt(n)/(k sqrt(x)) cycles: each part against e^{2 pi i f} wins a factor
// 1/(2 pi G1 F1).  Parts capped at 4, where the window's derivative
// constants are still of moderate size.
double dual_term_bound(double n, long k, double a, double b, const TestFunction& f) {
  const double g0 = 1.3 * f.sup * std::pow(a, -0.25);
  const double f1 = 0.5 * std::sqrt(n) / (static_cast<double>(k) * std::sqrt(b));
  const double g1 = f.derivative_scale;
  double best = f.sup * (b - a) * std::pow(a, -0.25);  // trivial estimate
  for (int p = 1; p <= 4; ++p) {
    double v = g0 * std::pow(2.0 * kPi * g1 * f1, -p) * std::pow(1.0 + g1 / f.mu, p) *
               (b - a);
    best = std::min(best, v);
  }
  return best;
}

// Envelope of cosh(pi kappa) K_{2 i kappa}(y), uniform in the turning point.
double k_kernel_envelope(double kappa, double y) {
  const double mu = 2.0 * kappa;
  if (y <= mu + 1.0) return 2.0;
  const double eta = std::sqrt(y * y - mu * mu) - mu * std::acos(mu / y);
  return 1.5 * std::sqrt(kPi / (2.0 * y)) * std::exp(kPi * kappa - eta);
}

}  // namespace

TestFunction plateau_test_function(const PlateauWindow& w) {
  TestFunction f;
  PlateauWindow copy = w;
  f.value = [copy](double x) { return plateau_eval(copy, x, 0); };
  f.sup = 1.0;
  f.derivative_scale = w.u;
  f.mu = 0.5 * w.m;
  return f;
}

VoronoiRhs voronoi_rhs(const CoefficientTable& table, const TestFunction& f, double a,
                       double b, const RationalApprox& approx, double tail_tol,
                       const VoronoiOptions& opt) {
  if (table.kind() != FormKind::kMaass) {
    throw DomainError("voronoi_rhs: the two-sided identity needs a Maass table");
  }
  if (!(0.0 < a && a < b)) throw DomainError("voronoi_rhs: need 0 < a < b");
  if (!(tail_tol > 0.0)) throw DomainError("voronoi_rhs: need tail_tol > 0");
  if (static_cast<double>(approx.k) * static_cast<double>(approx.k) > a) {
    throw DomainError("voronoi_rhs: need k^2 below the interval start");
  }

  const double kappa = table.kappa();
  const long k = approx.k;
  const double kd = static_cast<double>(k);
  const RootTable roots(k);
  const BesselAsymptotic rec = make_bessel_asymptotic(kappa);
  const double tmax = table_sup(table);

  const std::complex<double> iunit(0.0, 1.0);
  const std::complex<double> coef_dual = iunit / std::sqrt(2.0 * kd);
  const std::complex<double> e_m8 = unit(-0.125), e_p8 = unit(0.125);

  const double exact_cut = opt.regime_factor * kd * kd;  // exact Bessel while n a <= cut

  VoronoiRhs out;
  std::complex<double> jsum(0.0, 0.0);
  std::vector<double> recent;
  double quad_budget_used = 0.0;
  long n = 1;
  for (; n <= opt.max_terms; ++n) {
    const double nd = static_cast<double>(n);
    if (n > table.n_max()) {
      throw TruncationError("voronoi_rhs: dual series needs coefficients past the table");
    }
    const double tn = table.coeff(n);
    const std::complex<double> twist = roots(-n * approx.hbar, k);
    const double tol_n = std::max(0.03 * tail_tol / (1.0 + nd * nd / 576.0),
                                  1e-3 * tail_tol);

    std::complex<double> term;
    if (nd * a <= exact_cut) {
      PhaseSpec ps;
      ps.f = [](double) { return 0.0; };
      ps.fp = [nd, kd](double x) { return std::sqrt(nd) / (kd * std::sqrt(x)); };
      ps.fpp = [](double) { return 0.0; };
      ps.g = [&, nd](double x) -> std::complex<double> {
        double arg = 4.0 * kPi * std::sqrt(nd * x) / kd;
        return bessel_j_imag_diff(kappa, arg) * f.value(x);
      };
      std::complex<double> integral = quad_oscillatory(ps, nullptr, a, b, tol_n);
      term = kPi * iunit / (kd * std::sinh(kPi * kappa)) * tn * twist * integral;
    } else {
      const std::complex<double> coef = coef_dual * tn * twist * std::pow(nd, -0.25);
      const double itol = tol_n / (2.0 * std::abs(coef) + 1e-30);
      PhaseSpec plus;
      plus.f = [nd, kd](double x) { return 2.0 * std::sqrt(nd * x) / kd; };
      plus.fp = [nd, kd](double x) { return std::sqrt(nd) / (kd * std::sqrt(x)); };
      plus.fpp = [nd, kd](double x) { return -0.5 * std::sqrt(nd) / (kd * std::pow(x, 1.5)); };
      plus.g = [&, nd](double x) -> std::complex<double> {
        double big = 4.0 * kPi * std::sqrt(nd * x) / kd;
        return std::pow(x, -0.25) * hankel_correction(rec, big) * f.value(x);
      };
      PhaseSpec minus = plus;
      minus.f = [nd, kd](double x) { return -2.0 * std::sqrt(nd * x) / kd; };
      minus.fp = [nd, kd](double x) { return -std::sqrt(nd) / (kd * std::sqrt(x)); };
      minus.fpp = [nd, kd](double x) { return 0.5 * std::sqrt(nd) / (kd * std::pow(x, 1.5)); };
      minus.g = [&, nd](double x) -> std::complex<double> {
        double big = 4.0 * kPi * std::sqrt(nd * x) / kd;
        return std::pow(x, -0.25) * std::conj(hankel_correction(rec, big)) * f.value(x);
      };
      std::complex<double> ip = quad_oscillatory(plus, nullptr, a, b, itol);
      std::complex<double> im = quad_oscillatory(minus, nullptr, a, b, itol);
      term = coef * (e_m8 * ip - e_p8 * im);
    }
    jsum += term;
    quad_budget_used += tol_n;
    recent.push_back(std::abs(term));
    if (recent.size() > 8) recent.erase(recent.begin());

    if (nd * a > exact_cut && n >= 12) {
      double nb = nd + 1.0;
      // Analytic tail: per-term integration-by-parts bound, summed crudely.
      double per = std::pow(2.0 / kd, 0.5) * tmax * std::pow(nb, -0.25) *
                   dual_term_bound(nb, k, a, b, f);
      double analytic_tail = per * nb;
      // Empirical tail: the window is smooth, so terms decay faster than any
      // power once the parts regime is reached; n * max(recent) is a cushion.
      double recent_max = *std::max_element(recent.begin(), recent.end());
      double empirical_tail = recent_max * nb;
      double tail = std::min(analytic_tail, empirical_tail);
      if (tail < 0.5 * tail_tol && recent_max < 0.05 * tail_tol) {
        out.tail_bound = tail + quad_budget_used;
        out.truncation_n = n;
        break;
      }
    }
  }
  if (out.truncation_n == 0) {
    throw TruncationError("voronoi_rhs: tail bound unattainable within the term budget");
  }
  out.j_series = jsum;

  // K-series: exponentially localized.
  std::complex<double> ksum(0.0, 0.0);
  const double pk = 4.0 * std::cosh(kPi * kappa) / kd;
  for (long m = 1; m <= opt.max_terms; ++m) {
    const double md = static_cast<double>(m);
    const double ymin = 4.0 * kPi * std::sqrt(md * a) / kd;
    const double env = k_kernel_envelope(kappa, ymin);
    if (4.0 * tmax * env * (b - a) / kd < 0.005 * tail_tol && m > 1) break;
    if (m > table.n_max()) {
      throw TruncationError("voronoi_rhs: K-series needs coefficients past the table");
    }
    const double tnm = table.coeff_signed(-m);
    const std::complex<double> twist = roots(m * approx.hbar, k);
    PhaseSpec ps;
    ps.f = [](double) { return 0.0; };
    ps.fp = [md, kd](double x) { return std::sqrt(md) / (kd * std::sqrt(x)); };
    ps.fpp = [](double) { return 0.0; };
    ps.g = [&, md](double x) -> std::complex<double> {
      double arg = 4.0 * kPi * std::sqrt(md * x) / kd;
      return {bessel_k_imag(kappa, arg) * f.value(x), 0.0};
    };
    double tol_m = 0.02 * tail_tol / (md * md + 4.0);
    std::complex<double> integral = quad_oscillatory(ps, nullptr, a, b, tol_m / (pk + 1.0));
    ksum += pk * tnm * twist * integral;
  }
  out.k_series = ksum;
  out.value = out.j_series + out.k_series;
  return out;
}

TruncatedVoronoi truncated_voronoi_main(const CoefficientTable& table, double x,
                                        long n_terms, const RationalApprox& approx) {
  if (n_terms < 1) throw DomainError("truncated_voronoi_main: need N >= 1");
  if (static_cast<double>(n_terms) > x) {
    throw RegimeError("truncated_voronoi_main: N must stay below x");
  }
  const long k = approx.k;
  const double kd = static_cast<double>(k);
  if (kd * kd > x) throw RegimeError("truncated_voronoi_main: need k << sqrt(x)");
  if (n_terms > table.n_max()) throw RangeError("truncated_voronoi_main: N beyond table");

  const RootTable roots(k);
  const double amp = std::sqrt(kd) * std::pow(x, 0.25) / (kPi * std::sqrt(2.0));
  std::complex<double> acc(0.0, 0.0);
  for (long n = 1; n <= n_terms; ++n) {
    const double nd = static_cast<double>(n);
    const double ph = 4.0 * kPi * std::sqrt(nd * x) / kd - kPi / 4.0;
    acc += table.coeff(n) * roots(-n * approx.hbar, k) * std::pow(nd, -0.75) * std::cos(ph);
  }
  TruncatedVoronoi out;
  out.main = amp * acc;
  const double theta = table.theta();
  out.residual_bound = kd * std::pow(x, 0.5 + theta + 0.01) /
                       std::sqrt(static_cast<double>(n_terms));
  return out;
}

double TransformSetup::p_phase(int j, double y, double x) const {
  const double s = (j == 1) ? 1.0 : -1.0;
  const double rv = static_cast<double>(r.h) / static_cast<double>(r.k);
  return phase.f(x) - rv * x + s * (2.0 * std::sqrt(y * x) / static_cast<double>(r.k) - 0.125);
}

double TransformSetup::p_deriv(int j, double y, double x) const {
  const double s = (j == 1) ? 1.0 : -1.0;
  const double rv = static_cast<double>(r.h) / static_cast<double>(r.k);
  return phase.fp(x) - rv + s * std::sqrt(y) / (static_cast<double>(r.k) * std::sqrt(x));
}

double TransformSetup::p_second(int j, double y, double x) const {
  const double s = (j == 1) ? 1.0 : -1.0;
  return phase.fpp(x) - s * 0.5 * std::sqrt(y) / (static_cast<double>(r.k) * std::pow(x, 1.5));
}

double TransformSetup::saddle(int j, double y) const {
  // j = 1 roots live in (m1, M(r)), j = 2 roots in (M(r), m2).
  double lo = (j == 1) ? m1 : m_of_r;
  double hi = (j == 1) ? m_of_r : m2;
  double flo = p_deriv(j, y, lo);
  double fhi = p_deriv(j, y, hi);
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw SetupError("transform saddle: no sign change for this dual frequency");
  }
  bool rising = fhi > 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * m1; ++it) {
    double mid = 0.5 * (lo + hi);
    if ((p_deriv(j, y, mid) > 0.0) == rising) hi = mid;
    else lo = mid;
  }
  double x0 = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    double dd = p_second(j, y, x0);
    if (dd != 0.0) {
      double nx = x0 - p_deriv(j, y, x0) / dd;
      if (nx > m1 && nx < m2) x0 = nx;
    }
  }
  return x0;
}

TransformSetup transform_setup(const PhaseSpec& phase, const RationalApprox& r, double m1,
                               double m2, double u, int j_smooth) {
  if (!(m1 < m2)) throw SetupError("transform_setup: need m1 < m2");
  TransformSetup s;
  s.phase = phase;
  s.r = r;
  s.m1 = m1;
  s.m2 = m2;
  s.u = u;
  s.j_smooth = j_smooth;

  const double rv = static_cast<double>(r.h) / static_cast<double>(r.k);
  double flo = phase.fp(m1) - rv, fhi = phase.fp(m2) - rv;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw SetupError("transform_setup: f'(x) = r has no interior solution");
  }
  double lo = m1, hi = m2;
  bool rising = fhi > 0.0;
  while (hi - lo > 1e-14 * m1) {
    double mid = 0.5 * (lo + hi);
    if ((phase.fp(mid) - rv > 0.0) == rising) hi = mid;
    else lo = mid;
  }
  s.m_of_r = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    double dd = phase.fpp(s.m_of_r);
    if (dd != 0.0) {
      double nx = s.m_of_r - (phase.fp(s.m_of_r) - rv) / dd;
      if (nx > m1 && nx < m2) s.m_of_r = nx;
    }
  }

  s.dist1 = s.m_of_r - m1;
  s.dist2 = m2 - s.m_of_r;
  const double kd = static_cast<double>(r.k);
  auto dual_range = [&](double endpoint) {
    double d = rv - phase.fp(endpoint);
    return d * d * kd * kd * endpoint;
  };
  s.n1 = dual_range(m1);
  s.n2 = dual_range(m2);
  s.m1_shift = m1 + j_smooth * u;
  s.m2_shift = m2 - j_smooth * u;
  s.n1_prime = dual_range(s.m1_shift);
  s.n2_prime = dual_range(s.m2_shift);

  // Hypothesis checks; failures are recorded, not fatal.
  auto warn = [&s](bool ok, const std::string& msg) {
    if (!ok) s.warnings.push_back(msg);
  };
  const double F = phase.phase_scale;
  warn(kd <= std::pow(m1, 0.5 - s.delta1), "k exceeds M1^(1/2-d1)");
  double rr = rv * m1 / F;
  warn(rr >= 0.1 && rr <= 10.0, "r out of scale with F/M1");
  double mr = s.dist1 / s.dist2;
  warn(mr >= 0.25 && mr <= 4.0, "endpoint distances m1, m2 not comparable");
  double lower = std::pow(m1, s.delta2) *
                 std::max(m1 / std::sqrt(F), std::fabs(static_cast<double>(r.h) * kd));
  warn(s.dist1 >= lower, "m_1 below the admissible range");
  warn(s.dist1 <= std::pow(m1, 1.0 - s.delta3), "m_1 above the admissible range");
  warn(u >= std::pow(m1, 1.0 + s.delta4) / std::sqrt(F), "U below F^(-1/2) M1^(1+d4)");
  warn(j_smooth * u < 0.5 * (m2 - m1), "J U reaches past half the interval");
  for (double x : {m1, 0.5 * (m1 + m2), m2}) {
    double scaled = phase.fpp(x) * m1 * m1 / F;
    warn(phase.fpp(x) > 0.0 && scaled >= 0.1 && scaled <= 10.0,
         "declared phase scale F is off");
  }
  warn(s.n1_prime < s.n1 && s.n2_prime < s.n2, "dual ranges not nested");
  return s;
}

TransformResult transform_rhs(const TransformSetup& setup, const CoefficientTable& table,
                              bool ignore_warnings) {
  if (!setup.warnings.empty() && !ignore_warnings) {
    throw SetupError("transform_rhs: hypothesis checks failed (" + setup.warnings.front() +
                     "); pass ignore_warnings to override");
  }
  const long k = setup.r.k;
  const double kd = static_cast<double>(k);
  const RootTable roots(k);
  const SmoothWindow win = setup.window();

  TransformResult out;
  std::complex<double> acc(0.0, 0.0);
  const std::complex<double> pref = std::complex<double>(0.0, 1.0) / std::sqrt(2.0 * kd);
  apply_thread_cap();

  for (int j = 1; j <= 2; ++j) {
    const double nj = (j == 1) ? setup.n1 : setup.n2;
    const double sign = (j == 1) ? 1.0 : -1.0;
    auto& wlist = (j == 1) ? out.weights1 : out.weights2;
    const long count = static_cast<long>(std::ceil(nj)) - 1;
    if (count > table.n_max()) {
      throw RangeError("transform_rhs: dual sum outruns the coefficient table");
    }
    std::vector<std::complex<double>> terms(static_cast<size_t>(std::max<long>(count, 0)));
    std::vector<std::complex<double>> ws(terms.size());
    bool convex_ok = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(&& : convex_ok)
#endif
    for (long n = 1; n <= count; ++n) {
      const double nd = static_cast<double>(n);
      if (!(nd < nj)) continue;  // strict cut, exact-integer n_j excluded
      const double x0 = setup.saddle(j, nd);
      const double pdd = setup.p_second(j, nd, x0);
      if (!(pdd > 0.0)) {
        convex_ok = false;
        continue;
      }
      const std::complex<double> w = xi_eval(win, pdd, x0);
      ws[static_cast<size_t>(n - 1)] = w;
      std::complex<double> amp =
          setup.phase.g ? setup.phase.g(x0) : std::complex<double>(1.0, 0.0);
      const double ph = setup.p_phase(j, nd, x0) + 0.125;
      terms[static_cast<size_t>(n - 1)] = sign * w * table.coeff(n) *
                                          roots(-n * setup.r.hbar, k) *
                                          std::pow(nd, -0.25) * std::pow(x0, -0.25) * amp /
                                          std::sqrt(pdd) * unit(ph);
    }
    if (!convex_ok) throw SetupError("transform_rhs: nonconvex phase at a saddle");
    for (long n = 1; n <= count; ++n) {
      if (!(static_cast<double>(n) < nj)) break;
      wlist.push_back(ws[static_cast<size_t>(n - 1)]);
      acc += terms[static_cast<size_t>(n - 1)];
    }
  }
  out.value = pref * acc;

  const double F = setup.phase.phase_scale;
  const double G = setup.phase.amp_bound;
  const double L = std::log(setup.m1);
  out.error_budget = std::pow(kd, -0.5) * std::sqrt(setup.dist1) / F * G *
                     std::pow(std::fabs(static_cast<double>(setup.r.h)), 1.5) * setup.u *
                     L * std::pow(F, 0.25) * std::pow(setup.m1, table.theta());
  return out;
}

std::complex<double> smoothed_nonlinear_sum(const CoefficientTable& table,
                                            const PhaseSpec& phase,
                                            const SmoothWindow& window) {
  const long n0 = static_cast<long>(std::ceil(window.m1));
  const long n1 = static_cast<long>(std::floor(window.m2));
  if (n0 < 1 || n1 > table.n_max()) {
    throw RangeError("smoothed_nonlinear_sum: window outside the table");
  }
  std::complex<double> acc(0.0, 0.0);
  for (long n = n0; n <= n1; ++n) {
    const double x = static_cast<double>(n);
    const double w = eta_eval(window, x);
    if (w == 0.0) continue;
    std::complex<double> amp = phase.g ? phase.g(x) : std::complex<double>(1.0, 0.0);
    acc += w * table.coeff(n) * amp * unit(phase.f(x) + phase.alpha * x);
  }
  return acc;
}

AFEResult afe_dual(const CoefficientTable& table, double m, double delta,
                   const RationalApprox& approx) {
  if (approx.eta == 0.0) {
    throw DegenerateApproxError("afe_dual: eta = 0 has no dual sum");
  }
  const double kd = static_cast<double>(approx.k);
  const double eta = approx.eta;
  const double n_dual = kd * kd * eta * eta * m;
  if (n_dual < 1.0) throw DomainError("afe_dual: k^2 eta^2 M must be >= 1");
  if (kd > std::pow(m, 0.25) + 1e-9) throw DomainError("afe_dual: need k <= M^(1/4)");
  if (std::fabs(eta) > 1.0 / (kd * std::pow(m, 0.25)) + 1e-12) {
    throw DomainError("afe_dual: need |eta| <= 1/(k M^(1/4))");
  }
  if (m + delta > static_cast<double>(table.n_max())) {
    throw RangeError("afe_dual: direct sum outside the table");
  }
  const double dual_delta = kd * kd * eta * eta * delta;
  if (n_dual + dual_delta > static_cast<double>(table.n_max())) {
    throw RangeError("afe_dual: dual sum outside the table");
  }

  AFEResult out;
  out.n_dual = n_dual;
  out.dual_delta = dual_delta;
  out.predicted_exponent = table.theta() / 2.0 - 1.0 / 12.0;
  const double hbar = static_cast<double>(approx.hbar);
  out.beta = -hbar / kd - 1.0 / (kd * kd * eta);

  SumSpec direct;
  direct.m = m;
  direct.delta = delta;
  direct.alpha = approx.alpha();
  out.lhs = evaluate_sum(table, direct) / std::sqrt(m);

  // Dual side: e(n beta) split into the exact rational twist and the smooth
  // part n/(k^2 eta), whose magnitude stays ~ eta M.
  const RootTable roots(approx.k);
  const double inv = -1.0 / (kd * kd * eta);
  const long a0 = static_cast<long>(std::ceil(n_dual));
  const long a1 = static_cast<long>(std::floor(n_dual + dual_delta));
  std::complex<double> acc(0.0, 0.0);
  for (long n = a0; n <= a1; ++n) {
    std::complex<double> ph =
        roots(-n * approx.hbar, approx.k) * unit(phase_mod1(static_cast<double>(n), inv));
    acc += table.coeff(n) * ph;
  }
  out.rhs = acc / std::sqrt(n_dual);
  out.err = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace vorlab
