#include "vorlab/forms.hpp"

#include <gmp.h>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "vorlab/errors.hpp"

namespace vorlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// NTT-friendly primes with large power-of-two subgroups.
struct NttPrime {
  u64 p, g;
};
constexpr NttPrime kNttPrimes[3] = {
    {4179340454199820289ULL, 3},  // 29 * 2^57 + 1
    {1945555039024054273ULL, 5},  // 27 * 2^56 + 1
    {180143985094819841ULL, 6},   // 5 * 2^55 + 1
};

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

void ntt(std::vector<u64>& a, bool inverse, const NttPrime& pr) {
  const size_t n = a.size();
  const u64 p = pr.p;
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    u64 w = powmod(pr.g, (p - 1) / len, p);
    if (inverse) w = powmod(w, p - 2, p);
    for (size_t i = 0; i < n; i += len) {
      u64 wn = 1;
      for (size_t j = 0; j < len / 2; ++j) {
        u64 u = a[i + j];
        u64 v = mulmod(a[i + j + len / 2], wn, p);
        a[i + j] = u + v < p ? u + v : u + v - p;
        a[i + j + len / 2] = u >= v ? u - v : u + p - v;
        wn = mulmod(wn, w, p);
      }
    }
  }
  if (inverse) {
    u64 ninv = powmod(n % p, p - 2, p);
    for (auto& x : a) x = mulmod(x, ninv, p);
  }
}

// Squares a polynomial mod p, truncated to `keep` coefficients.
std::vector<u64> ntt_square(const std::vector<u64>& a, size_t keep, const NttPrime& pr) {
  size_t need = std::min(keep, 2 * a.size() - 1);
  size_t n = 1;
  while (n < 2 * a.size() - 1) n <<= 1;
  std::vector<u64> f(a);
  f.resize(n, 0);
  ntt(f, false, pr);
  for (auto& x : f) x = mulmod(x, x, pr.p);
  ntt(f, true, pr);
  f.resize(need);
  return f;
}

// tau(1..n_max), exact.  Delta = q * J(q)^8 with J the eta^3 theta series.
std::vector<i128> tau_exact(long n_max) {
  if (n_max < 1) throw DomainError("builtin_tau: n_max must be positive");
  if (n_max > 2000000) {
    throw CapacityError("builtin_tau: tau(n) beyond n = 2e6 can overflow 128-bit integers");
  }
  const size_t deg = static_cast<size_t>(n_max);  // J^8 needed up to q^{n_max-1}

  // J(q) = sum (-1)^k (2k+1) q^{k(k+1)/2}, sparse.
  std::vector<long> tri_idx;
  std::vector<long> tri_val;
  for (long k = 0;; ++k) {
    long t = k * (k + 1) / 2;
    if (t >= static_cast<long>(deg)) break;
    tri_idx.push_back(t);
    tri_val.push_back((k % 2 == 0 ? 1L : -1L) * (2 * k + 1));
  }

  // J^2 by sparse convolution; these coefficients stay tiny.
  std::vector<long long> j2(deg, 0);
  for (size_t i = 0; i < tri_idx.size(); ++i) {
    for (size_t j = i; j < tri_idx.size(); ++j) {
      long d = tri_idx[i] + tri_idx[j];
      if (d >= static_cast<long>(deg)) break;
      long long v = static_cast<long long>(tri_val[i]) * tri_val[j];
      j2[static_cast<size_t>(d)] += (i == j) ? v : 2 * v;
    }
  }

  // J^8 = ((J^2)^2)^2 mod each prime; CRT only at the end.
  std::vector<u64> res[3];
  for (int t = 0; t < 3; ++t) {
    const NttPrime& pr = kNttPrimes[t];
    std::vector<u64> a(deg);
    for (size_t i = 0; i < deg; ++i) {
      long long v = j2[i];
      a[i] = v >= 0 ? static_cast<u64>(v) % pr.p : pr.p - static_cast<u64>(-v) % pr.p;
      if (a[i] == pr.p) a[i] = 0;
    }
    a = ntt_square(a, deg, pr);
    a.resize(deg, 0);
    res[t] = ntt_square(a, deg, pr);
    res[t].resize(deg, 0);
  }

  // Balanced two-prime Garner with the third prime as an overflow sentinel;
  // a coefficient past the two-prime range is rebuilt exactly with GMP.
  const u64 p1 = kNttPrimes[0].p, p2 = kNttPrimes[1].p, p3 = kNttPrimes[2].p;
  const u64 inv_p1_mod_p2 = powmod(p1 % p2, p2 - 2, p2);
  const i128 p1p2 = static_cast<i128>(p1) * static_cast<i128>(p2);

  std::vector<i128> tau(static_cast<size_t>(n_max) + 1, 0);
  for (long n = 1; n <= n_max; ++n) {
    u64 r1 = res[0][static_cast<size_t>(n - 1)];
    u64 r2 = res[1][static_cast<size_t>(n - 1)];
    u64 r3 = res[2][static_cast<size_t>(n - 1)];
    u64 r1m = r1 % p2;
    u64 d = r2 >= r1m ? r2 - r1m : r2 + p2 - r1m;
    u64 t1 = mulmod(d, inv_p1_mod_p2, p2);
    i128 x = static_cast<i128>(r1) + static_cast<i128>(p1) * static_cast<i128>(t1);
    if (x > p1p2 / 2) x -= p1p2;
    i128 xm = x % static_cast<i128>(p3);
    if (xm < 0) xm += p3;
    if (static_cast<u64>(xm) == r3) {
      tau[static_cast<size_t>(n)] = x;
      continue;
    }
    // Full three-prime reconstruction (rare, very large coefficients only).
    mpz_t z, m3, q12, g, half, zr;
    mpz_inits(z, m3, q12, g, half, zr, nullptr);
    mpz_set_ui(m3, p3);
    mpz_set_ui(q12, p1);
    {
      mpz_t tp2;
      mpz_init_set_ui(tp2, p2);
      mpz_mul(q12, q12, tp2);
      mpz_clear(tp2);
    }
    mpz_set_ui(z, r1);
    {
      mpz_t tmp;
      mpz_init_set_ui(tmp, t1);
      mpz_addmul_ui(z, tmp, p1);
      mpz_clear(tmp);
    }
    mpz_mod(zr, z, m3);
    u64 cur = mpz_get_ui(zr);
    u64 step = static_cast<u64>((static_cast<u128>(p1 % p3) * (p2 % p3)) % p3);
    u64 need = r3 >= cur ? r3 - cur : r3 + p3 - cur;
    u64 k3 = mulmod(need, powmod(step, p3 - 2, p3), p3);
    mpz_addmul_ui(z, q12, k3);
    mpz_mul(g, q12, m3);
    mpz_fdiv_q_ui(half, g, 2);
    if (mpz_cmp(z, half) > 0) mpz_sub(z, z, g);
    int neg = mpz_sgn(z) < 0;
    mpz_abs(z, z);
    u64 lo = mpz_get_ui(z);
    mpz_fdiv_q_2exp(z, z, 64);
    u64 hi = mpz_get_ui(z);
    i128 v = (static_cast<i128>(hi) << 64) | static_cast<i128>(lo);
    tau[static_cast<size_t>(n)] = neg ? -v : v;
    mpz_clears(z, m3, q12, g, half, zr, nullptr);
  }
  return tau;
}

bool is_prime_small(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

CoefficientTable CoefficientTable::from_values(FormKind kind, double kappa, Parity parity,
                                               double theta, std::vector<double> coeffs,
                                               std::string label) {
  if (coeffs.empty()) throw DomainError("coefficient table must contain t(1)");
  if (std::fabs(coeffs[0] - 1.0) > 1e-9) {
    throw NormalizationError("t(1) must equal 1 (Hecke normalization)");
  }
  CoefficientTable t;
  t.kind_ = kind;
  t.kappa_ = kappa;
  t.parity_ = parity;
  t.theta_ = theta;
  t.label_ = std::move(label);
  t.t_ = std::move(coeffs);
  return t;
}

double CoefficientTable::coeff(long n) const {
  if (n < 1 || n > n_max()) {
    throw RangeError("coefficient index " + std::to_string(n) + " outside [1, " +
                     std::to_string(n_max()) + "]");
  }
  return t_[static_cast<size_t>(n - 1)];
}

double CoefficientTable::coeff_signed(long n) const {
  if (n > 0) return coeff(n);
  if (n == 0) throw RangeError("coefficient index 0");
  if (kind_ != FormKind::kMaass || parity_ == Parity::kNone) {
    throw DomainError("negative-index access requires a Maass table with declared parity");
  }
  double v = coeff(-n);
  return parity_ == Parity::kEven ? v : -v;
}

std::uint64_t CoefficientTable::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* p, size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  int kind = static_cast<int>(kind_), par = static_cast<int>(parity_);
  mix(&kind, sizeof kind);
  mix(&par, sizeof par);
  mix(&kappa_, sizeof kappa_);
  mix(&theta_, sizeof theta_);
  if (!t_.empty()) mix(t_.data(), t_.size() * sizeof(double));
  return h;
}

CoefficientTable load_coefficients(const std::string& path, FormKind expected_kind) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open coefficient file: " + path);

  double kappa = 0.0, theta = 7.0 / 64.0;
  Parity parity = Parity::kNone;
  FormKind kind = expected_kind;
  std::string label;
  bool saw_kappa = false;

  std::vector<double> coeffs;
  long expect = 1;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      std::string body = trim(s.substr(1));
      size_t eq = body.find('=');
      if (eq == std::string::npos) continue;
      std::string key = trim(body.substr(0, eq));
      std::string val = trim(body.substr(eq + 1));
      if (key == "kappa") {
        kappa = std::stod(val);
        saw_kappa = true;
      } else if (key == "theta") {
        theta = std::stod(val);
      } else if (key == "parity") {
        if (val == "even") parity = Parity::kEven;
        else if (val == "odd") parity = Parity::kOdd;
        else parity = Parity::kNone;
      } else if (key == "kind") {
        if (val == "maass") kind = FormKind::kMaass;
        else if (val == "holomorphic") kind = FormKind::kHolomorphic;
        else kind = FormKind::kSynthetic;
      } else if (key == "label") {
        label = val;
      }
      continue;
    }
    std::istringstream ls(s);
    long n;
    double v;
    if (!(ls >> n >> v)) {
      throw IngestOrder("unparseable data line " + std::to_string(lineno));
    }
    if (n < expect) {
      throw IngestOrder("non-monotone index n=" + std::to_string(n) + " at line " +
                        std::to_string(lineno));
    }
    if (n > expect) throw IngestGap("missing coefficient n=" + std::to_string(expect));
    coeffs.push_back(v);
    ++expect;
  }
  if (coeffs.empty()) throw IngestGap("file contains no coefficients");
  if (!saw_kappa && expected_kind == FormKind::kMaass) {
    throw DomainError("header does not declare kappa");
  }
  if (kind != expected_kind) {
    throw DomainError("file kind does not match the expected kind");
  }
  return CoefficientTable::from_values(kind, kappa, parity, theta, std::move(coeffs),
                                       std::move(label));
}

void save_coefficients(const CoefficientTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write coefficient file: " + path);
  const char* kind = table.kind() == FormKind::kMaass         ? "maass"
                     : table.kind() == FormKind::kHolomorphic ? "holomorphic"
                                                              : "synthetic";
  const char* par = table.parity() == Parity::kEven  ? "even"
                    : table.parity() == Parity::kOdd ? "odd"
                                                     : "none";
  char buf[80];
  out << "# kind=" << kind << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", table.kappa());
  out << "# kappa=" << buf << "\n";
  out << "# parity=" << par << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", table.theta());
  out << "# theta=" << buf << "\n";
  if (!table.label().empty()) out << "# label=" << table.label() << "\n";
  for (long n = 1; n <= table.n_max(); ++n) {
    std::snprintf(buf, sizeof buf, "%ld %.17g", n, table.coeff(n));
    out << buf << "\n";
  }
}

CoefficientTable builtin_tau(long n_max) {
  std::vector<i128> tau = tau_exact(n_max);
  std::vector<double> a(static_cast<size_t>(n_max));
  for (long n = 1; n <= n_max; ++n) {
    double nd = static_cast<double>(n);
    a[static_cast<size_t>(n - 1)] =
        static_cast<double>(tau[static_cast<size_t>(n)]) / std::pow(nd, 5.5);
  }
  return CoefficientTable::from_values(FormKind::kHolomorphic, 12.0, Parity::kNone, 0.0,
                                       std::move(a), "ramanujan-tau");
}

CoefficientTable constant_table(long n_max) {
  if (n_max < 1) throw DomainError("constant_table: n_max must be positive");
  std::vector<double> a(static_cast<size_t>(n_max), 1.0);
  return CoefficientTable::from_values(FormKind::kSynthetic, 1.0, Parity::kNone, 0.0,
                                       std::move(a), "all-ones");
}

ValidationReport validate_hecke(const CoefficientTable& table, double tol) {
  const long n_max = table.n_max();
  if (n_max < 6) throw DomainError("validate_hecke: table too short");
  ValidationReport rep;

  for (long m = 2; m * m <= n_max; ++m) {
    for (long n = m + 1; m * n <= n_max; ++n) {
      if (std::gcd(m, n) != 1) continue;
      ++rep.pairs_checked;
      double r = std::fabs(table.coeff(m) * table.coeff(n) - table.coeff(m * n));
      rep.max_residual = std::max(rep.max_residual, r);
      if (r > tol) rep.multiplicative.push_back({m, n, r});
    }
  }
  for (long p = 2; p * p <= n_max; ++p) {
    if (!is_prime_small(p)) continue;
    double tp = table.coeff(p);
    long pj = p;
    double tj = tp, tjm1 = 1.0;
    while (pj <= n_max / p) {
      long pj1 = pj * p;
      ++rep.pairs_checked;
      double r = std::fabs(tp * tj - table.coeff(pj1) - tjm1);
      rep.max_residual = std::max(rep.max_residual, r);
      if (r > tol) rep.prime_power.push_back({p, pj, r});
      tjm1 = tj;
      tj = table.coeff(pj1);
      pj = pj1;
    }
  }
  return rep;
}

RankinSelbergFit rankin_selberg_fit(const CoefficientTable& table,
                                    const std::vector<long>& m_grid) {
  if (m_grid.size() < 2) throw InsufficientData("rankin_selberg_fit: need at least 2 points");
  long mx = *std::max_element(m_grid.begin(), m_grid.end());
  if (mx > table.n_max()) throw RangeError("rankin_selberg_fit: grid exceeds the table");

  std::vector<long> sorted(m_grid);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> partial_at(sorted.size());
  double s = 0.0;
  long n = 1;
  for (size_t i = 0; i < sorted.size(); ++i) {
    for (; n <= sorted[i]; ++n) {
      double t = table.coeff(n);
      s += t * t;
    }
    partial_at[i] = s;
  }

  RankinSelbergFit fit;
  fit.partial_sums.resize(m_grid.size());
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < m_grid.size(); ++i) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), m_grid[i]);
    fit.partial_sums[i] = partial_at[static_cast<size_t>(it - sorted.begin())];
    sxy += fit.partial_sums[i] * static_cast<double>(m_grid[i]);
    sxx += static_cast<double>(m_grid[i]) * static_cast<double>(m_grid[i]);
  }
  fit.a = sxy / sxx;
  fit.residuals.resize(m_grid.size());
  for (size_t i = 0; i < m_grid.size(); ++i) {
    fit.residuals[i] = fit.partial_sums[i] - fit.a * static_cast<double>(m_grid[i]);
  }
  return fit;
}

}  // namespace vorlab
