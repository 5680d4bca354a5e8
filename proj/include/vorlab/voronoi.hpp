#pragma once

// Two-sided summation identities: the full Voronoi identity for Maass-form
// coefficients, its truncated version, the smoothed-sum transformation
// formula, and the approximate functional equation between dual sums.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "vorlab/forms.hpp"
#include "vorlab/oscillatory.hpp"
#include "vorlab/special_fn.hpp"
#include "vorlab/sums.hpp"
#include "vorlab/weights.hpp"

namespace vorlab {

struct VoronoiOptions {
  double regime_factor = 10.0;  // exact Bessel values while n*a <= factor * k^2
  long max_terms = 100000;
  double bound_slack = 3.0;     // slack multiplier used by bound-vs-oracle checks
};

struct TestFunction {
  std::function<double(double)> value;
  double sup = 1.0;               // G_0
  double derivative_scale = 1.0;  // G_1: nu-th derivative ~ G_0 G_1^{-nu}
  double mu = 1.0;                // analyticity proxy for the phase factors
};

TestFunction plateau_test_function(const PlateauWindow& w);

struct VoronoiRhs {
  std::complex<double> value;
  std::complex<double> j_series;
  std::complex<double> k_series;
  long truncation_n = 0;
  double tail_bound = 0.0;
};

// Right side of the Maass Voronoi identity for sum'_{a<=n<=b} t(n) e(nh/k) f(n):
// Bessel values are exact while n a <= regime_factor k^2, the large-argument
// expansion beyond; the dual series is cut once the integration-by-parts tail
// estimate drops below tail_tol.
VoronoiRhs voronoi_rhs(const CoefficientTable& table, const TestFunction& f, double a,
                       double b, const RationalApprox& approx, double tail_tol,
                       const VoronoiOptions& opt = {});

struct TruncatedVoronoi {
  std::complex<double> main;
  double residual_bound = 0.0;
};

// Finite main term (1/(pi sqrt 2)) k^{1/2} x^{1/4} sum_{n<=N} ... cos(...)
// with the power-saving residual bound evaluated at epsilon = 0.01.
TruncatedVoronoi truncated_voronoi_main(const CoefficientTable& table, double x,
                                        long n_terms, const RationalApprox& approx);

struct TransformSetup {
  PhaseSpec phase;
  RationalApprox r;
  double m1 = 0.0, m2 = 0.0;  // summation interval
  double u = 0.0;
  int j_smooth = 0;  // J of the eta_J window

  double m_of_r = 0.0;        // solution of f'(M(r)) = r
  double dist1 = 0.0, dist2 = 0.0;      // m_j: distances of the endpoints to M(r)
  double m1_shift = 0.0, m2_shift = 0.0;  // M_j' = M_j -+ J U
  double n1 = 0.0, n2 = 0.0;    // dual ranges n_j
  double n1_prime = 0.0, n2_prime = 0.0;

  std::vector<std::string> warnings;  // failed hypothesis checks
  double delta1 = 0.05, delta2 = 0.05, delta3 = 0.05, delta4 = 0.08;

  // Phase p_{j,n}(x) = f(x) - r x +- (2 sqrt(nx)/k - 1/8) and its saddle.
  double p_phase(int j, double y, double x) const;
  double p_deriv(int j, double y, double x) const;
  double p_second(int j, double y, double x) const;
  double saddle(int j, double y) const;  // unique zero of p'_{j,y} in (m1, m2)

  SmoothWindow window() const { return SmoothWindow{m1, m2, u, j_smooth}; }
};

// Solves M(r), the dual ranges n_j, n_j', and records hypothesis checks
// (failures are warnings, not fatal).  Throws SetupError when f'(M(r)) = r
// has no interior solution.
TransformSetup transform_setup(const PhaseSpec& phase, const RationalApprox& r,
                               double m1, double m2, double u, int j_smooth);

struct TransformResult {
  std::complex<double> value;
  double error_budget = 0.0;
  std::vector<std::complex<double>> weights1, weights2;  // w_j(n) = xi_J(x_{j,n})
};

// Requires the setup hypothesis checks to be clean unless overridden.
TransformResult transform_rhs(const TransformSetup& setup, const CoefficientTable& table,
                              bool ignore_warnings = false);

// Left side of the transformation formula: sum eta_J(n) t(n) g(n) e(f(n) + alpha n).
std::complex<double> smoothed_nonlinear_sum(const CoefficientTable& table,
                                            const PhaseSpec& phase,
                                            const SmoothWindow& window);

struct AFEResult {
  std::complex<double> lhs;  // T(M, Delta; alpha) / sqrt(M)
  std::complex<double> rhs;  // T(N, k^2 eta^2 Delta; beta) / sqrt(N)
  double beta = 0.0;
  double n_dual = 0.0;       // N = k^2 eta^2 M
  double dual_delta = 0.0;   // k^2 eta^2 Delta
  double err = 0.0;          // |lhs - rhs|
  double predicted_exponent = 0.0;  // theta/2 - 1/12
};

// Both sides of the approximate functional equation by direct summation.
AFEResult afe_dual(const CoefficientTable& table, double m, double delta,
                   const RationalApprox& approx);

}  // namespace vorlab
