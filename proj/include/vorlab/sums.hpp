#pragma once

// Direct evaluation of linear exponential sums sum t(n) e(n alpha) with
// optional weights, plus Dirichlet/Farey rational approximation of alpha.

#include <complex>
#include <functional>

#include "vorlab/forms.hpp"

namespace vorlab {

struct RationalApprox {
  long h = 0;
  long k = 1;
  double eta = 0.0;  // alpha - h/k
  long hbar = 0;     // inverse of h mod k, in [0, k); 0 when k = 1

  double alpha() const { return static_cast<double>(h) / static_cast<double>(k) + eta; }
};

// Best rational approximation with k <= q_max via continued-fraction
// convergents; satisfies |alpha - h/k| <= 1/(k (q_max + 1)).
RationalApprox farey_approx(double alpha, long q_max);

// Exact rational h/k (eta = 0), reduced, with the modular inverse filled in.
RationalApprox make_rational(long h, long k);

enum class EndpointRule { kClosed, kPrimed };

struct SumSpec {
  double m = 1.0;      // sum over integers n in [m, m + delta]
  double delta = 1.0;
  double alpha = 0.0;
  std::function<double(double)> weight;  // null means weight 1
  EndpointRule endpoint_rule = EndpointRule::kClosed;
};

// Compensated direct summation of t(n) weight(n) e(n alpha); the primed rule
// halves terms at integer endpoints.
std::complex<double> evaluate_sum(const CoefficientTable& table, const SumSpec& spec);

// sum_{n <= m} t(n) e(n h / k); the eta of the approximation is ignored.
std::complex<double> twisted_long_sum(const CoefficientTable& table, double m,
                                      const RationalApprox& approx);

// n * alpha mod 1, assembled from an exact FMA product split so the phase
// stays accurate when n * |alpha| is large.
double phase_mod1(double n, double alpha);

}  // namespace vorlab
