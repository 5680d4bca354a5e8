#pragma once

// Smoothing devices: the iterated box-convolution window eta_J and its
// saddle-boundary factor xi_J, a dyadic partition of unity, and a C-infinity
// plateau bump.  All window objects are immutable; evaluators are pure.

#include <complex>
#include <utility>
#include <vector>

namespace vorlab {

struct SmoothWindow {
  double m1 = 0.0, m2 = 1.0;  // support interval
  double u = 0.1;             // ramp-step width
  int j = 1;                  // convolution count; eta_J is C^{J-1}
};

// Throws DomainError unless m1 < m2, u > 0, and 2 j u < m2 - m1.
SmoothWindow make_smooth_window(double m1, double m2, double u, int j);

// Exact piecewise-polynomial value of eta_J at x (0 outside [m1, m2]).
double eta_eval(const SmoothWindow& w, double x);

// Stationary-phase boundary coefficients c_nu for given J (c_0 = 1).
std::vector<std::complex<double>> xi_coefficients(int j);

// Boundary factor multiplying the saddle-point main term: 1 when the saddle
// x0 sits in the flat part, the matched ramp expansion otherwise.  fpp is
// the second derivative of the full phase at x0 (positive).
std::complex<double> xi_eval(const SmoothWindow& w, double fpp, double x0);

struct PartitionOfUnity {
  double m = 0.0;      // left end of the covered interval
  double delta = 1.0;  // its length
  int levels = 0;      // L: pieces run ell = -L .. L

  // Breakpoint M_ell for ell in [-2L-1, 2L+2].
  double breakpoint(int ell) const;
  // w_ell(x): supported on [M_{2ell-1}, M_{2ell+2}], flat 1 on [M_{2ell}, M_{2ell+1}].
  double weight(int ell, double x) const;
  double weight_sum(double x) const;
  std::pair<double, double> support(int ell) const;
};

// Dyadic partition with flat tops towards the interval center and supports
// shrinking like delta * 4^{-|ell|}.  levels < 0 picks L automatically.
PartitionOfUnity partition_build(double m, double delta, int levels = -1);

struct PlateauWindow {
  double m = 0.0;      // support [m, m + delta]
  double delta = 1.0;
  double u = 0.1;      // ramp width; flat on [m + u, m + delta - u]
};

PlateauWindow make_plateau_window(double m, double delta, double u);

// Value of the bump or of its first/second derivative at x.
double plateau_eval(const PlateauWindow& w, double x, int derivative_order = 0);

}  // namespace vorlab
