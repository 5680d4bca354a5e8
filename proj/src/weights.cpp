#include "vorlab/weights.hpp"

#include <algorithm>
#include <cmath>

#include "vorlab/errors.hpp"

namespace vorlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxJ = 16;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// CDF of the sum of J independent uniform[0, U] variables (Irwin-Hall):
// (J! U^J)^{-1} sum_j (-1)^j C(J,j) (s - jU)_+^J.
double box_cdf(int j, double u, double s) {
  if (s <= 0.0) return 0.0;
  if (s >= j * u) return 1.0;
  double fact = 1.0;
  for (int i = 2; i <= j; ++i) fact *= i;
  double acc = 0.0;
  for (int i = 0; i <= j; ++i) {
    double base = s - i * u;
    if (base <= 0.0) break;
    double p = 1.0;
    for (int q = 0; q < j; ++q) p *= base / u;
    acc += (i % 2 == 0 ? 1.0 : -1.0) * binom(j, i) * p;
  }
  return acc / fact;
}

// e^{-1/t} smooth step and derivatives.
double sigma0(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double rho0(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = sigma0(t), b = sigma0(1.0 - t);
  return a / (a + b);
}

double rho1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double a = sigma0(t), b = sigma0(1.0 - t);
  double ap = a / (t * t);
  double bp = -b / ((1.0 - t) * (1.0 - t));
  double d = a + b;
  return (ap * b - a * bp) / (d * d);
}

double rho2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double a = sigma0(t), b = sigma0(1.0 - t);
  double ap = a / (t * t);
  double bp = -b / ((1.0 - t) * (1.0 - t));
  double app = a * (1.0 - 2.0 * t) / (t * t * t * t);
  double bpp = b * (2.0 * t - 1.0) / std::pow(1.0 - t, 4);
  double d = a + b;
  double dp = ap + bp;
  double dpp = app + bpp;
  double num1 = app * d - a * dpp;
  double num2 = ap * d - a * dp;
  return num1 / (d * d) - 2.0 * dp * num2 / (d * d * d);
}

}  // namespace

SmoothWindow make_smooth_window(double m1, double m2, double u, int j) {
  if (!(m1 < m2)) throw DomainError("smooth window: need m1 < m2");
  if (!(u > 0.0)) throw DomainError("smooth window: need u > 0");
  if (j < 0 || j > kMaxJ) throw DomainError("smooth window: j outside [0, 16]");
  if (2.0 * j * u >= m2 - m1) throw DomainError("smooth window: need 2 j u < m2 - m1");
  return SmoothWindow{m1, m2, u, j};
}

double eta_eval(const SmoothWindow& w, double x) {
  if (w.j == 0) return (x >= w.m1 && x <= w.m2) ? 1.0 : 0.0;
  if (x <= w.m1 || x >= w.m2) return 0.0;
  return box_cdf(w.j, w.u, x - w.m1) - box_cdf(w.j, w.u, x - (w.m2 - w.j * w.u));
}

std::vector<std::complex<double>> xi_coefficients(int j) {
  if (j < 0 || j > kMaxJ) throw DomainError("xi_coefficients: j outside [0, 16]");
  // nu-th coefficient of the stationary-phase expansion applied to the
  // degree-J ramp pieces: J! / ((J-2nu)! nu!) * (i / 4 pi)^nu.  The order
  // 2 nu = J is excluded: its ramp pieces are piecewise constant, so keeping
  // it would break the continuity of xi_J at the ramp-interior boundary; the
  // dropped term has the size of the knot error terms anyway.
  std::vector<std::complex<double>> c;
  const std::complex<double> base(0.0, 1.0 / (4.0 * kPi));
  std::complex<double> pw(1.0, 0.0);
  double fact_nu = 1.0;
  for (int nu = 0; 2 * nu < j || nu == 0; ++nu) {
    if (nu > 0) {
      pw *= base;
      fact_nu *= nu;
    }
    double fall = 1.0;  // J! / (J - 2nu)!
    for (int i = 0; i < 2 * nu; ++i) fall *= (j - i);
    c.push_back(fall / fact_nu * pw);
  }
  return c;
}

std::complex<double> xi_eval(const SmoothWindow& w, double fpp, double x0) {
  if (!(x0 > w.m1 && x0 < w.m2)) throw DomainError("xi_eval: x0 outside (m1, m2)");
  if (!(fpp > 0.0)) throw DomainError("xi_eval: need positive second derivative");
  const int j = w.j;
  const double u = w.u;
  const double left_edge = w.m1 + j * u;
  const double right_edge = w.m2 - j * u;
  if (x0 > left_edge && x0 < right_edge) return {1.0, 0.0};

  const bool left = x0 <= left_edge;
  const double s0 = left ? x0 - w.m1 : w.m2 - x0;  // distance into the ramp
  auto c = xi_coefficients(j);

  double fact = 1.0;
  for (int i = 2; i <= j; ++i) fact *= i;
  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i <= j; ++i) {
    double base = s0 - i * u;
    if (base <= 0.0) break;  // j_1 / j_2 cut: only knots strictly below x0
    std::complex<double> inner(0.0, 0.0);
    for (size_t nu = 0; nu < c.size(); ++nu) {
      double p = std::pow(base, static_cast<double>(j) - 2.0 * static_cast<double>(nu));
      inner += c[nu] * std::pow(fpp, -static_cast<double>(nu)) * p;
    }
    acc += (i % 2 == 0 ? 1.0 : -1.0) * binom(j, i) * inner;
  }
  double upow = 1.0;
  for (int i = 0; i < j; ++i) upow *= u;
  return acc / (fact * upow);
}

double PartitionOfUnity::breakpoint(int ell) const {
  // M_0 = m + delta/2, M_{+l} = m + delta (1 - 2^{-l-1}), M_{-l} = m + delta 2^{-l-1}.
  if (ell >= 0) return m + delta * (1.0 - std::ldexp(0.5, -ell));
  return m + delta * std::ldexp(0.5, ell);
}

double PartitionOfUnity::weight(int ell, double x) const {
  const double a = breakpoint(2 * ell - 1);
  const double b = breakpoint(2 * ell);
  const double c = breakpoint(2 * ell + 1);
  const double d = breakpoint(2 * ell + 2);
  if (x <= a || x >= d) return 0.0;
  if (x < b) return rho0((x - a) / (b - a));
  if (x <= c) return 1.0;
  return 1.0 - rho0((x - c) / (d - c));
}

double PartitionOfUnity::weight_sum(double x) const {
  double s = 0.0;
  for (int ell = -levels; ell <= levels; ++ell) s += weight(ell, x);
  return s;
}

std::pair<double, double> PartitionOfUnity::support(int ell) const {
  return {breakpoint(2 * ell - 1), breakpoint(2 * ell + 2)};
}

PartitionOfUnity partition_build(double m, double delta, int levels) {
  if (!(delta >= 4.0)) throw DomainError("partition_build: need delta >= 4");
  if (levels < 0) {
    levels = 0;
    while (delta * std::pow(4.0, -(levels + 1)) >= 8.0 && levels < 24) ++levels;
  }
  return PartitionOfUnity{m, delta, levels};
}

PlateauWindow make_plateau_window(double m, double delta, double u) {
  if (!(delta > 0.0) || !(u > 0.0)) throw DomainError("plateau window: need positive delta, u");
  if (!(2.0 * u <= delta)) throw DomainError("plateau window: need 2 u <= delta");
  return PlateauWindow{m, delta, u};
}

double plateau_eval(const PlateauWindow& w, double x, int derivative_order) {
  if (derivative_order < 0 || derivative_order > 2) {
    throw DomainError("plateau_eval: derivative order must be 0, 1 or 2");
  }
  if (x <= w.m || x >= w.m + w.delta) return 0.0;
  const double ta = (x - w.m) / w.u;
  const double tb = (w.m + w.delta - x) / w.u;
  const double a = rho0(ta), b = rho0(tb);
  if (derivative_order == 0) return a * b;
  const double a1 = rho1(ta) / w.u, b1 = -rho1(tb) / w.u;
  if (derivative_order == 1) return a1 * b + a * b1;
  const double a2 = rho2(ta) / (w.u * w.u), b2 = rho2(tb) / (w.u * w.u);
  return a2 * b + 2.0 * a1 * b1 + a * b2;
}

}  // namespace vorlab
