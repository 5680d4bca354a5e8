#pragma once

// Coefficient tables: normalized Hecke eigenvalues t(n) of a Maass form, the
// normalized coefficients of a holomorphic cusp form, or synthetic data for
// control experiments.  Tables are immutable after construction.

#include <cstdint>
#include <string>
#include <vector>

namespace vorlab {

enum class FormKind { kMaass, kHolomorphic, kSynthetic };
enum class Parity { kEven, kOdd, kNone };

class CoefficientTable {
 public:
  static CoefficientTable from_values(FormKind kind, double kappa, Parity parity,
                                      double theta, std::vector<double> coeffs,
                                      std::string label = {});

  FormKind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  Parity parity() const { return parity_; }
  double theta() const { return theta_; }
  const std::string& label() const { return label_; }
  long n_max() const { return static_cast<long>(t_.size()); }

  // t(n) for 1 <= n <= n_max; anything else throws RangeError.
  double coeff(long n) const;

  // Resolves negative indices through the parity (Maass tables only).
  double coeff_signed(long n) const;

  std::uint64_t checksum() const;

 private:
  FormKind kind_ = FormKind::kSynthetic;
  double kappa_ = 0.0;
  Parity parity_ = Parity::kNone;
  double theta_ = 7.0 / 64.0;
  std::string label_;
  std::vector<double> t_;
};

// Plain-text ingestion: '#'-prefixed "key=value" header lines (kappa, parity,
// theta, kind, label), then "n value" data lines with n consecutive from 1.
CoefficientTable load_coefficients(const std::string& path, FormKind expected_kind);
void save_coefficients(const CoefficientTable& table, const std::string& path);

// Normalized Ramanujan tau table a(n) = tau(n) / n^{11/2}; tau computed
// exactly (integer arithmetic throughout), converted to double once.
CoefficientTable builtin_tau(long n_max);

// t(n) = 1 control table.
CoefficientTable constant_table(long n_max);

struct HeckeViolation {
  long m = 0, n = 0;  // coprime pair, or (p, p^j) for the recursion
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<HeckeViolation> multiplicative;
  std::vector<HeckeViolation> prime_power;
  long pairs_checked = 0;
  double max_residual = 0.0;
  bool passed() const { return multiplicative.empty() && prime_power.empty(); }
};

// Checks t(m) t(n) = t(mn) over coprime pairs with mn <= n_max and the
// recursion t(p) t(p^j) = t(p^{j+1}) + t(p^{j-1}); report-only.
ValidationReport validate_hecke(const CoefficientTable& table, double tol);

struct RankinSelbergFit {
  double a = 0.0;  // least-squares slope of sum_{n<=M} t(n)^2 against M
  std::vector<double> partial_sums;
  std::vector<double> residuals;
};

RankinSelbergFit rankin_selberg_fit(const CoefficientTable& table,
                                    const std::vector<long>& m_grid);

}  // namespace vorlab
