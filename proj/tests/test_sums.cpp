#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "oracles.hpp"
#include "vorlab/errors.hpp"
#include "vorlab/forms.hpp"
#include "vorlab/sums.hpp"

using namespace vorlab;

TEST_CASE("farey_approx: exact rationals, pi, zero") {
  auto half = farey_approx(0.5, 10);
  CHECK(half.h == 1);
  CHECK(half.k == 2);
  CHECK(half.eta == 0.0);
  CHECK(half.hbar == 1);

  auto pi = farey_approx(3.14159265358979323846, 100);
  CHECK(pi.h == 22);
  CHECK(pi.k == 7);
  CHECK(std::fabs(pi.eta) == doctest::Approx(1.2644e-3).epsilon(1e-3));
  CHECK(std::fabs(pi.eta) <= 1.0 / (7.0 * 101.0));

  auto zero = farey_approx(0.0, 5);
  CHECK(zero.h == 0);
  CHECK(zero.k == 1);
  CHECK(zero.eta == 0.0);
}

TEST_CASE("farey_approx: Dirichlet inequality holds on a seeded sweep") {
  for (int i = 0; i < 400; ++i) {
    double alpha = -3.0 + 6.0 * (0.5 + std::sin(i * 1.0) * 0.499);
    for (long q : {5L, 12L, 100L, 4096L}) {
      auto r = farey_approx(alpha, q);
      CHECK(r.k >= 1);
      CHECK(r.k <= q);
      CHECK(std::gcd(std::labs(r.h), r.k) == 1);
      CHECK(std::fabs(alpha - static_cast<double>(r.h) / static_cast<double>(r.k)) <=
            1.0 / (static_cast<double>(r.k) * static_cast<double>(q + 1)) + 1e-15);
      if (r.k > 1) CHECK((r.h % r.k + r.k) * r.hbar % r.k == 1 % r.k);
      // reconstruction
      CHECK(static_cast<double>(r.h) / static_cast<double>(r.k) + r.eta ==
            doctest::Approx(alpha).epsilon(1e-15));
    }
  }
}

TEST_CASE("evaluate_sum: unit-coefficient closed forms") {
  auto ones = constant_table(16);
  SumSpec s;
  s.m = 1.0;
  s.delta = 3.0;
  s.alpha = 0.0;
  CHECK(std::abs(evaluate_sum(ones, s) - std::complex<double>(4.0, 0.0)) < 1e-14);
  s.alpha = 0.5;
  CHECK(std::abs(evaluate_sum(ones, s)) < 1e-14);
}

TEST_CASE("evaluate_sum: matches the naive oracle on tau data") {
  auto tau = builtin_tau(200);
  std::vector<double> t;
  for (long n = 1; n <= 200; ++n) t.push_back(tau.coeff(n));
  SumSpec s;
  s.m = 100.0;
  s.delta = 50.0;
  s.alpha = 1.0 / 3.0;
  auto mine = evaluate_sum(tau, s);
  auto ref = oracle::naive_sum(t, 100, 150, 1.0 / 3.0);
  CHECK(std::abs(mine - ref) <= 1e-12 * std::abs(ref));
}

TEST_CASE("evaluate_sum: primed endpoints halve integer boundary terms") {
  auto ones = constant_table(16);
  SumSpec s;
  s.m = 2.0;
  s.delta = 3.0;
  s.alpha = 0.0;
  s.endpoint_rule = EndpointRule::kPrimed;
  CHECK(std::abs(evaluate_sum(ones, s) - std::complex<double>(3.0, 0.0)) < 1e-14);
  s.m = 2.5;  // non-integer endpoints: no halving
  s.delta = 3.0;
  CHECK(std::abs(evaluate_sum(ones, s) - std::complex<double>(3.0, 0.0)) < 1e-14);
}

TEST_CASE("evaluate_sum: conjugation and additivity") {
  auto tau = builtin_tau(4000);
  for (double alpha : {0.123456789, 0.618033988749, 2.71828 / 7.0}) {
    SumSpec s;
    s.m = 1000.0;
    s.delta = 2500.0;
    s.alpha = alpha;
    auto plus = evaluate_sum(tau, s);
    s.alpha = -alpha;
    auto minus = evaluate_sum(tau, s);
    CHECK(std::abs(plus - std::conj(minus)) <= 1e-13 * std::abs(plus));

    s.alpha = alpha;
    s.delta = 1100.0;
    auto part1 = evaluate_sum(tau, s);
    SumSpec s2;
    s2.m = 2101.0;  // (m + delta1, m + delta]: integers from 2101
    s2.delta = 1399.0;
    s2.alpha = alpha;
    auto part2 = evaluate_sum(tau, s2);
    CHECK(std::abs(plus - (part1 + part2)) <= 1e-13 * std::abs(plus) + 1e-13);
  }
}

TEST_CASE("evaluate_sum: phase stays accurate for large n * alpha") {
  auto ones = constant_table(2000);
  // alpha = 2^20 + 1/4 is exactly representable, so e(n alpha) = e(n/4)
  double alpha = 1048576.0 + 0.25;
  SumSpec s;
  s.m = 1500.0;
  s.delta = 400.0;
  s.alpha = alpha;
  auto mine = evaluate_sum(ones, s);
  std::vector<double> t(2000, 1.0);
  auto ref = oracle::naive_sum(t, 1500, 1900, 0.25);
  CHECK(std::abs(mine - ref) <= 1e-11 * (1.0 + std::abs(ref)));
}

TEST_CASE("evaluate_sum: range errors") {
  auto tau = builtin_tau(100);
  SumSpec s;
  s.m = 50.0;
  s.delta = 60.0;
  CHECK_THROWS_AS(evaluate_sum(tau, s), RangeError);
}

TEST_CASE("twisted_long_sum: trivial character, shift invariance, cross-check") {
  auto tau = builtin_tau(10000);
  auto r1 = make_rational(0, 1);
  auto direct = twisted_long_sum(tau, 10000.0, r1);
  SumSpec s;
  s.m = 1.0;
  s.delta = 9999.0;
  s.alpha = 0.0;
  CHECK(std::abs(direct - evaluate_sum(tau, s)) <= 1e-12 * (1.0 + std::abs(direct)));

  auto ra = make_rational(1, 3);
  auto rb = make_rational(4, 3);  // h -> h + k
  auto va = twisted_long_sum(tau, 10000.0, ra);
  auto vb = twisted_long_sum(tau, 10000.0, rb);
  CHECK(std::abs(va - vb) <= 1e-12 * (1.0 + std::abs(va)));

  // h/k = 1/4 is exactly representable: the two routes agree to 1e-12
  auto rc = make_rational(1, 4);
  auto vc = twisted_long_sum(tau, 10000.0, rc);
  s.alpha = 0.25;
  CHECK(std::abs(vc - evaluate_sum(tau, s)) <= 1e-12 * (1.0 + std::abs(vc)));

  // h/k = 1/3: fl(1/3) carries a representation error delta, so the two
  // mathematical quantities differ by up to 2 pi M |delta| sum|t(n)|
  s.alpha = 1.0 / 3.0;
  auto via_eval = evaluate_sum(tau, s);
  double mass = 0.0;
  for (long n = 1; n <= 10000; ++n) mass += std::fabs(tau.coeff(n));
  double drift = 2.0 * 3.14159265358979 * 10000.0 * (1.0 / 3.0 - 0.3333333333333333333L) *
                 mass;
  CHECK(std::abs(va - via_eval) <= 1e-12 * (1.0 + std::abs(va)) + std::fabs(drift));
}

TEST_CASE("phase_mod1: exact product splitting") {
  CHECK(phase_mod1(3.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  // n*alpha ~ 1e12: with alpha exactly representable the result is exact
  double alpha = 1048576.0 + 0.25;
  double f = phase_mod1(999999.0, alpha);
  CHECK(std::fabs(std::remainder(f - 0.75, 1.0)) < 1e-12);
}
