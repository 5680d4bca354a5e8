#pragma once

// Exponential integrals: an oscillation-aware adaptive quadrature reference,
// the stationary-phase main-term evaluation with windowed boundary factor,
// the no-saddle bound, and the classical derivative-test bounds.

#include <complex>
#include <functional>

#include "vorlab/weights.hpp"

namespace vorlab {

struct PhaseSpec {
  std::function<double(double)> f;    // phase
  std::function<double(double)> fp;   // f'
  std::function<double(double)> fpp;  // f''
  std::function<std::complex<double>(double)> g;  // amplitude; null means 1

  double phase_scale = 1.0;  // F: f' ~ F/M1, f'' ~ F/M1^2 on the interval
  double amp_bound = 1.0;    // G
  double mu = 1.0;           // analyticity-radius proxy
  double alpha = 0.0;        // linear shift: total phase f(x) + alpha x
};

using WeightFn = std::function<double(double)>;

// integral of g(x) w(x) e(f(x) + alpha x) over [a, b] by adaptive panels of
// 15-point Gauss-Legendre, panel width capped at a quarter local wavelength.
// Throws QuadratureBudgetError if the panel budget is exhausted.
std::complex<double> quad_oscillatory(const PhaseSpec& phase, const WeightFn& window,
                                      double a, double b, double tol);

struct SaddleResult {
  std::complex<double> main_term;
  double error_budget = 0.0;  // e1 + e2 + e3 with the decay constant below
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  double x0 = 0.0;
  std::complex<double> xi{1.0, 0.0};
  double decay_constant = 1.0;  // the "A" of the exponential error terms
};

// Main term xi(x0) g(x0) f''(x0)^{-1/2} e(f(x0) + alpha x0 + 1/8) of the
// eta_J-weighted integral, with the three error expressions of the
// stationary-phase estimate (decay constant pinned at 1 and reported).
// Throws NoSaddleError when f' + alpha has no sign change on the window.
SaddleResult saddle_point_eval(const PhaseSpec& phase, const SmoothWindow& window);

// Bound for the saddle-free case; throws SaddlePresentError when a sign
// change of f' + alpha is detected.
double no_saddle_bound(const PhaseSpec& phase, const SmoothWindow& window);

enum class BoundKind { kFirstDerivative, kSecondDerivative, kJutilaMotohashi };

struct BoundParams {
  double g0 = 1.0;           // amplitude bound (G, or G_0)
  double lambda = 1.0;       // lower bound on |f'| (first) or |f''| (second)
  double total_var_g = 0.0;  // integral of |g'|
  double g1 = 1.0;           // derivative scale of g (smooth-cutoff bound)
  double f1 = 1.0;           // lower bound on |f'| over the complex neighborhood
  double mu = 1.0;
  int p = 1;                 // integration-by-parts count
  double m1 = 0.0, m2 = 1.0;
};

double analytic_bounds(BoundKind kind, const BoundParams& params);

}  // namespace vorlab
