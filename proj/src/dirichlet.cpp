#include "simplexlab/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simplexlab/error.hpp"

namespace simplexlab {

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  const u128 p = static_cast<u128>(a) * b;
  if (p > kMax) throw OverflowError(what);
  return static_cast<std::uint64_t>(p);
}

// C(v + K - 1, K - 1) = C(v + K - 1, v)
std::uint64_t stars_and_bars(unsigned K, unsigned v) {
  u128 c = 1;
  for (unsigned i = 1; i <= v; ++i) {
    c = c * (K - 1 + i);
    if (c > kMax) throw OverflowError("divisor_dK: binomial exceeds 64 bits");
    c /= i;
  }
  return static_cast<std::uint64_t>(c);
}

// p^r b_K(p^r) = sum_{s=0}^r C(s+K-1, K-1) p^{r-s}
std::uint64_t prime_power_numerator(unsigned K, std::uint64_t p, unsigned r) {
  std::uint64_t total = 0, pw = 1;
  for (unsigned s = r + 1; s-- > 0;) {
    const u128 t = static_cast<u128>(stars_and_bars(K, s)) * pw + total;
    if (t > kMax) throw OverflowError("coeff_bK: numerator exceeds 64 bits");
    total = static_cast<std::uint64_t>(t);
    if (s > 0) pw = checked_mul(pw, p, "coeff_bK: numerator exceeds 64 bits");
  }
  return total;
}

template <class Fn>
void factor(std::uint64_t n, Fn&& fn) {
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    if (n % p) continue;
    unsigned v = 0;
    while (n % p == 0) n /= p, ++v;
    fn(p, v);
  }
  if (n > 1) fn(n, 1u);
}

}  // namespace

std::uint64_t divisor_dK(unsigned K, std::uint64_t m) {
  require(K >= 1 && m >= 1, "divisor_dK: need K >= 1, m >= 1");
  std::uint64_t r = 1;
  factor(m, [&](std::uint64_t, unsigned v) { r = checked_mul(r, stars_and_bars(K, v), "divisor_dK: exceeds 64 bits"); });
  return r;
}

Rational coeff_bK(unsigned K, std::uint64_t n) {
  require(K >= 1 && n >= 1, "coeff_bK: need K >= 1, n >= 1");
  BigInt num = 1;
  factor(n, [&](std::uint64_t p, unsigned v) { num *= prime_power_numerator(K, p, v); });
  return Rational(num, BigInt(n));
}

bool divides_qj(std::uint64_t n, unsigned j) {
  require(n >= 1, "divides_qj: need n >= 1");
  if (j >= 64) return true;
  const std::uint64_t cap = std::uint64_t{1} << j;
  bool ok = true;
  factor(n, [&](std::uint64_t p, unsigned v) {
    u128 pw = 1;
    for (unsigned i = 0; i < v && pw <= cap; ++i) pw *= p;
    if (pw > cap) ok = false;
  });
  return ok;
}

double bK_prime_power_bound(unsigned K) {
  double s = 1;
  for (unsigned t = 1; t < 2000; ++t) {
    const double term = std::exp(K * std::log(t + 1.0) - t * std::log(2.0));
    s += term;
    if (t > 4 * K && term < 1e-18 * s) break;
  }
  return s;
}

DirichletTable::DirichletTable(unsigned K, std::uint64_t n_max) : K_(K), n_max_(n_max) {
  require(K >= 1 && n_max >= 1, "DirichletTable: need K >= 1, N_max >= 1");
  if (n_max > 100'000'000) throw ResourceLimitError("DirichletTable: N_max above 1e8");
  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (std::uint64_t i = 2; i <= n_max; ++i) {
    if (spf[i]) continue;
    for (std::uint64_t m = i; m <= n_max; m += i)
      if (!spf[m]) spf[m] = static_cast<std::uint32_t>(i);
  }
  num_.assign(n_max + 1, 0);
  max_pp_.assign(n_max + 1, 1);
  num_[1] = 1;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const std::uint64_t p = spf[n];
    std::uint64_t m = n;
    unsigned r = 0;
    std::uint64_t pw = 1;
    while (m % p == 0) m /= p, pw *= p, ++r;
    max_pp_[n] = std::max(pw, max_pp_[m]);
    num_[n] = checked_mul(prime_power_numerator(K, p, r), num_[m], "DirichletTable: numerator exceeds 64 bits");
  }
}

Rational DirichletTable::coeff(std::uint64_t n) const {
  require(n >= 1 && n <= n_max_, "DirichletTable: index out of range");
  return Rational(BigInt(num_[n]), BigInt(n));
}

TailSum tail_sum(const DirichletTable& table, double s, unsigned j) {
  require(s > 1, "tail_sum: the series diverges for s <= 1");
  require(j >= 1, "tail_sum: need j >= 1");
  TailSum r;
  r.K = table.K();
  r.s = s;
  r.j = j;
  r.n_max = table.n_max();
  const std::uint64_t cap = j >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << j;
  long double sum = 0, comp = 0;
  for (std::uint64_t n = 2; n <= table.n_max(); ++n) {
    if (table.max_prime_power(n) <= cap) continue;
    const long double term = static_cast<long double>(table.numerator(n)) * std::pow(static_cast<long double>(n), -1.0L - s);
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  r.sum = static_cast<double>(sum);
  r.bound = std::exp2(j * (1 - s)) / j;
  r.ratio = r.sum / r.bound;
  r.remainder_estimate = std::pow(M_PI * M_PI / 6, static_cast<double>(r.K)) *
                         std::pow(static_cast<double>(r.n_max), 1 - s) / (s - 1);
  r.remainder_ok = r.sum > 0 && r.remainder_estimate <= 0.01 * r.sum;
  return r;
}

TailSum tail_sum(unsigned K, double s, unsigned j, std::uint64_t n_max) {
  return tail_sum(DirichletTable(K, n_max), s, j);
}

}  // namespace simplexlab
