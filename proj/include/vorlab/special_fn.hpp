#pragma once

// Bessel kernels of purely imaginary order 2*i*kappa: the difference
// J_{2ik}(x) - J_{-2ik}(x), the real-valued K_{2ik}(x), their large-argument
// expansions, and the antiderivative expansion used by truncated Voronoi
// identities.

#include <complex>
#include <vector>

namespace vorlab {

enum class BesselMethod { kAuto, kSeries, kAsymptotic };

// Large-argument expansion record for J_{2ik}(x) - J_{-2ik}(x).
//
// With a_l the Hankel coefficients at order nu = 2*i*kappa (real numbers,
// since only nu^2 enters), the two phase branches carry
//   c_l^{+} = (+i)^l a_l / (4 pi)^l,   c_l^{-} = conj(c_l^{+}),
// normalized for arguments of the form 4 pi sqrt(n x) / k.
struct BesselAsymptotic {
  double kappa = 0.0;
  int order_terms = 0;  // K: depth available in c_plus / c_minus
  std::vector<std::complex<double>> c_plus;
  std::vector<std::complex<double>> c_minus;
  double crossover_x = 30.0;
  std::vector<double> hankel;  // a_l, l = 0..K (a_0 = 1)
};

BesselAsymptotic make_bessel_asymptotic(double kappa, int order_terms = 48);

// J_{2ik}(x) - J_{-2ik}(x).  Purely imaginary for real x; the real part of
// the returned value is identically zero.  kAuto switches from the ascending
// series to the large-argument expansion at crossover_x = max(30, 8*kappa).
// The series path escalates its working precision internally until the
// cancellation of the alternating sum is fully absorbed.
std::complex<double> bessel_j_imag_diff(double kappa, double x,
                                        BesselMethod method = BesselMethod::kAuto);

// K_{2ik}(x), real on the positive axis.
double bessel_k_imag(double kappa, double x);

// Expansion of  int_0^x Re(i J_{2ik}(4 pi sqrt(n v)/k)) dv  for n x >> k^2:
// three addressable main-term groups plus an explicit remainder bound.
struct JPrimitiveExpansion {
  std::complex<double> A1_plus, A1_minus;  // coefficients of e(+-2 sqrt(nx)/k)
  double A2 = 0.0;                         // constant-group coefficient
  std::complex<double> A3_plus, A3_minus;
  double B2 = 0.0;  // K-Bessel antiderivative constant, same kappa

  double leading_term = 0.0;     // A1 group evaluated: k^{3/2} n^{-3/4} x^{1/4} scale
  double constant_term = 0.0;    // A2 k^2 / n
  double secondary_term = 0.0;   // A3 group: k^{5/2} n^{-5/4} x^{-1/4} scale
  double remainder_bound = 0.0;  // explicit constant * k^{7/2} n^{-7/4} x^{-3/4}

  double value() const { return leading_term + constant_term + secondary_term; }
};

// Throws RegimeError unless n*x >= regime_factor * k^2.
JPrimitiveExpansion j_primitive_asymptotic(double kappa, long n, double x, long k,
                                           double regime_factor = 10.0);

// int_0^infty K_{2ik}(x) x dx = pi*kappa/sinh(pi*kappa); the constant B_2 of
// the K antiderivative expansion follows in closed form.
double k_primitive_b2(double kappa);

// S(X) = sum_l i^l a_l X^{-l}, truncated at the smallest term; the "+" phase
// branch of the large-argument expansion (the "-" branch is its conjugate).
std::complex<double> hankel_correction(const BesselAsymptotic& rec, double x);

namespace detail {
// Ascending-series evaluation of Im J_{2ik}(x) (sign = -1) or Im I_{2ik}(x)
// (sign = +1) with automatic precision escalation.  Exposed for tests.
struct SeriesEval {
  double imag_part = 0.0;
  double cancellation = 0.0;  // sum of |terms| / |result|
  int terms = 0;
  int precision_bits = 53;  // 53 double, 113 float128, else MPFR
};
SeriesEval bessel_series_imag(double kappa, double x, int sign);
}  // namespace detail

}  // namespace vorlab
