#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "vorlab/errors.hpp"
#include "vorlab/forms.hpp"

using namespace vorlab;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  std::string path = std::string("/tmp/vorlab_test_") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("load: plain two-line file") {
  auto path = write_temp("ok.txt",
                         "# kind=synthetic\n# kappa=1.0\n# parity=none\n"
                         "1 1.0\n2 -1.0\n");
  auto t = load_coefficients(path, FormKind::kSynthetic);
  CHECK(t.n_max() == 2);
  CHECK(t.coeff(2) == -1.0);
}

TEST_CASE("load: gap and order errors") {
  auto gap = write_temp("gap.txt", "# kind=synthetic\n1 1.0\n2 0.5\n4 0.25\n");
  CHECK_THROWS_AS(load_coefficients(gap, FormKind::kSynthetic), IngestGap);
  auto ord = write_temp("ord.txt", "# kind=synthetic\n1 1.0\n2 0.5\n2 0.25\n");
  CHECK_THROWS_AS(load_coefficients(ord, FormKind::kSynthetic), IngestOrder);
  auto nrm = write_temp("nrm.txt", "# kind=synthetic\n1 0.5\n2 0.5\n");
  CHECK_THROWS_AS(load_coefficients(nrm, FormKind::kSynthetic), NormalizationError);
}

TEST_CASE("load: bundled Maass table validates against the Hecke relations") {
  auto t = load_coefficients(std::string(VORLAB_SOURCE_DIR) + "/data/maass_r9.5337.txt",
                             FormKind::kMaass);
  CHECK(t.kind() == FormKind::kMaass);
  CHECK(t.kappa() == doctest::Approx(9.5336952613535576).epsilon(1e-12));
  CHECK(t.parity() == Parity::kOdd);
  auto rep = validate_hecke(t, 1e-6);
  CHECK(rep.passed());
}

TEST_CASE("builtin_tau: exact values against the q-expansion oracle") {
  auto tau = oracle::naive_tau(64);
  CHECK(static_cast<long long>(tau[2]) == -24);
  CHECK(static_cast<long long>(tau[3]) == 252);
  auto t = builtin_tau(64);
  CHECK(t.coeff(1) == 1.0);
  for (int n = 2; n <= 64; ++n) {
    double expect = static_cast<double>(tau[static_cast<size_t>(n)]) / std::pow(n, 5.5);
    CHECK(t.coeff(n) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("builtin_tau: NTT path matches the dense oracle on a longer stretch") {
  const int n = 3000;
  auto tau = oracle::naive_tau(n);
  auto t = builtin_tau(n);
  for (int i = 1; i <= n; ++i) {
    double expect = static_cast<double>(tau[static_cast<size_t>(i)]) / std::pow(i, 5.5);
    REQUIRE(t.coeff(i) == expect);  // identical: both convert one exact integer
  }
}

TEST_CASE("builtin_tau: Deligne bound |tau(p)| <= 2 p^{11/2} for p <= 100") {
  auto t = builtin_tau(100);
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
                71, 73, 79, 83, 89, 97}) {
    CHECK(std::fabs(t.coeff(p)) <= 2.0);  // normalized form of the bound
  }
}

TEST_CASE("save/load round trip preserves a table") {
  auto t = builtin_tau(64);
  save_coefficients(t, "/tmp/vorlab_test_roundtrip.txt");
  auto back = load_coefficients("/tmp/vorlab_test_roundtrip.txt", FormKind::kHolomorphic);
  CHECK(back.checksum() == t.checksum());
}

TEST_CASE("builtin_tau: deterministic and exact across runs") {
  auto a = builtin_tau(500);
  auto b = builtin_tau(500);
  CHECK(a.checksum() == b.checksum());
  CHECK_THROWS_AS(builtin_tau(3000000), CapacityError);
}

TEST_CASE("coefficient access: out of range is an error, parity resolves negatives") {
  auto t = builtin_tau(10);
  CHECK_THROWS_AS(t.coeff(11), RangeError);
  CHECK_THROWS_AS(t.coeff(0), RangeError);

  std::vector<double> v = {1.0, -0.5, 0.25};
  auto even = CoefficientTable::from_values(FormKind::kMaass, 1.0, Parity::kEven, 0.1, v);
  auto odd = CoefficientTable::from_values(FormKind::kMaass, 1.0, Parity::kOdd, 0.1, v);
  for (long n = 1; n <= 3; ++n) {
    CHECK(even.coeff_signed(-n) - even.coeff(n) == 0.0);  // exact
    CHECK(odd.coeff_signed(-n) + odd.coeff(n) == 0.0);
  }
  CHECK_THROWS_AS(t.coeff_signed(-2), DomainError);  // holomorphic: no parity rule
}

TEST_CASE("validate_hecke: tau passes tightly, the all-ones table is flagged") {
  auto t = builtin_tau(1000);
  CHECK(std::fabs(t.coeff(2) * t.coeff(3) - t.coeff(6)) < 1e-12);
  auto rep = validate_hecke(t, 1e-8);
  CHECK(rep.passed());
  CHECK(std::fabs(t.coeff(4) - (t.coeff(2) * t.coeff(2) - 1.0)) < 1e-12);

  auto ones = constant_table(100);
  auto rep2 = validate_hecke(ones, 0.5);
  CHECK_FALSE(rep2.passed());
  bool found = false;  // t(2)^2 - t(4) - 1 = -1 must be reported
  for (const auto& v : rep2.prime_power) {
    if (v.m == 2 && v.n == 2) found = true;
  }
  CHECK(found);
}

TEST_CASE("rankin_selberg_fit: all-ones is exactly linear; tau is stable") {
  auto ones = constant_table(1000);
  auto fit = rankin_selberg_fit(ones, {100, 300, 1000});
  CHECK(fit.a == doctest::Approx(1.0).epsilon(1e-14));
  for (double r : fit.residuals) CHECK(std::fabs(r) < 1e-9);

  auto tau = builtin_tau(40000);
  auto fit2 = rankin_selberg_fit(tau, {10000, 20000, 40000});
  double lo = 1e9, hi = 0.0;
  for (size_t i = 0; i < fit2.partial_sums.size(); ++i) {
    double ai = fit2.partial_sums[i] / static_cast<double>(std::vector<long>{
                                           10000, 20000, 40000}[i]);
    lo = std::min(lo, ai);
    hi = std::max(hi, ai);
  }
  CHECK(hi / lo < 1.1);  // per-point density estimates agree within 10%

  CHECK_THROWS_AS(rankin_selberg_fit(tau, {10000}), InsufficientData);
}
