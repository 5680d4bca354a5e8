#pragma once

// Parameter sweeps that confront the growth exponents with measured sum
// magnitudes through log-log regression.

#include <string>
#include <utility>
#include <vector>

#include "vorlab/forms.hpp"

namespace vorlab {

enum class ScanKind {
  kShortSum,
  kHolomorphicShort,
  kSupAlpha,
  kResonance,
  kMeanSquareShort,
  kMeanSquareLong,
  kTwistedLong,
  kAfeError,
  kLongerShort,
};

const char* scan_kind_name(ScanKind k);
ScanKind scan_kind_from_name(const std::string& name);

enum class FitMode { kTwoSided, kUpper };

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_halfwidth = 0.0;  // 95% band on the slope
  int n = 0;
};

// Ordinary least squares on (log x, log y).  Throws DomainError on
// nonpositive coordinates, InsufficientData below 4 points.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points, FitMode mode);

struct ScanPoint {
  double x = 0.0;      // abscissa before logs (M, Delta, or N depending on kind)
  double y = 0.0;      // measured magnitude
  double delta = 0.0;  // interval length used, when one applies
  std::string descriptor;
};

struct ScanResult {
  ScanKind kind = ScanKind::kSupAlpha;
  std::vector<ScanPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double ci_halfwidth = 0.0;
  double target_slope = 0.0;
  double tolerance = 0.1;
  bool one_sided = false;
  bool pass = false;
};

struct ScanConfig {
  std::vector<double> m_grid;    // M values (or Delta values for the short mean square)
  double delta_exponent = 0.7;   // Delta = M^exponent where a length is needed
  double delta_fixed = 0.0;      // fixed Delta where one is needed; 0 = derive
  double m_fixed = 0.0;          // fixed M for the Delta-gridded short mean square
  long resonance_d = 1;
  long k = 1;
  long h = 0;
  std::uint64_t seed = 7;
  int alpha_samples = 512;
  int x_samples = 200;
  double tolerance = -1.0;  // negative = per-kind default
};

ScanResult run_scan(const CoefficientTable& table, ScanKind kind, const ScanConfig& config);

// Deterministic counter-based stream: sample i of a given seed, in [0, 1).
double seeded_uniform(std::uint64_t seed, std::uint64_t index);

}  // namespace vorlab
