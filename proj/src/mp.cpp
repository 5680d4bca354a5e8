#include "vorlab/mp.hpp"

#include <gmp.h>

#include <deque>
#include <mutex>

namespace vorlab::mp {

namespace {

// Bernoulli numbers B_0, B_1, B_2, ... as exact rationals via the classical
// recurrence sum_{j<=m} C(m+1,j) B_j = 0.  Grown on demand, never shrunk.
class BernoulliTable {
 public:
  // Returns B_n as a Real at precision `prec`.
  Real get(unsigned n, mpfr_prec_t prec) {
    std::lock_guard<std::mutex> lock(mu_);
    while (vals_.size() <= n) grow();
    Real r;
    mpfr_set_prec(r.raw(), prec);
    mpfr_set_q(r.raw(), vals_[n].q, MPFR_RNDN);
    return r;
  }

  ~BernoulliTable() {
    for (auto& w : vals_) mpq_clear(w.q);
  }

 private:
  void grow() {
    size_t m = vals_.size();
    vals_.emplace_back();
    mpq_ptr b = vals_.back().q;
    mpq_init(b);
    if (m == 0) {
      mpq_set_ui(b, 1, 1);
      return;
    }
    // B_m = -1/(m+1) * sum_{j=0}^{m-1} C(m+1, j) B_j
    mpq_t acc, term;
    mpq_init(acc);
    mpq_init(term);
    mpz_t binom;
    mpz_init(binom);
    for (size_t j = 0; j < m; ++j) {
      mpz_bin_uiui(binom, m + 1, j);
      mpq_set_z(term, binom);
      mpq_mul(term, term, vals_[j].q);
      mpq_add(acc, acc, term);
    }
    mpq_t mp1;
    mpq_init(mp1);
    mpq_set_ui(mp1, m + 1, 1);
    mpq_div(acc, acc, mp1);
    mpq_neg(b, acc);
    mpq_canonicalize(b);
    mpq_clear(mp1);
    mpz_clear(binom);
    mpq_clear(term);
    mpq_clear(acc);
  }

  std::mutex mu_;
  struct Wrap { mpq_t q; };
  std::deque<Wrap> vals_;
};

BernoulliTable& bernoulli() {
  static BernoulliTable t;
  return t;
}

// log Gamma(z) by the Stirling series, valid once Re z is large enough for
// the requested precision.  Caller guarantees Re z >= sigma(prec).
Complex log_gamma_stirling(const Complex& z, mpfr_prec_t prec) {
  PrecGuard g(prec);
  Complex lz = log(z);
  Complex half(Real(1) / Real(2), Real(0));
  Complex res = (z - half) * lz - z;
  // + (1/2) log(2 pi)
  Real two_pi = Real(2) * pi();
  res.re += log(two_pi) / Real(2);

  Complex zinv = Complex(1.0, 0.0) / z;
  Complex zinv2 = zinv * zinv;
  Complex zpow = zinv;  // z^{-(2k-1)}
  Real tiny = exp(Real(static_cast<double>(-static_cast<long>(prec)) * 0.6931472) - Real(8));
  for (unsigned k = 1; k < 2000; ++k) {
    Real b2k = bernoulli().get(2 * k, prec);
    Real denom = Real(static_cast<long>(2 * k)) * Real(static_cast<long>(2 * k - 1));
    Complex term{b2k / denom * zpow.re, b2k / denom * zpow.im};
    res = res + term;
    if (abs(term) < tiny) break;
    zpow = zpow * zinv2;
  }
  return res;
}

}  // namespace

Complex gamma_complex(const Complex& z, mpfr_prec_t prec) {
  PrecGuard g(prec);
  // Shift so the Stirling series converges past 2^-prec.
  double sigma = std::max(12.0, static_cast<double>(prec) * 0.6931472 / 6.2831853 + 4.0);
  double rez = z.re.to_double();
  long n = 0;
  if (rez < sigma) n = static_cast<long>(sigma - rez) + 1;

  Complex zs = z + Complex(static_cast<double>(n), 0.0);
  Complex val = exp(log_gamma_stirling(zs, prec));
  for (long j = 0; j < n; ++j) {
    val = val / (z + Complex(static_cast<double>(j), 0.0));
  }
  return val;
}

}  // namespace vorlab::mp
