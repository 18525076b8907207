#pragma once

// Divisor functions d_K, the coefficients b_K(n) = sum_{m | n} d_K(m) / m of
// zeta(s+1)^K zeta(s), and tail sums over n not dividing q_j = lcm(1..2^j).

#include <cstdint>
#include <vector>

#include "simplexlab/rational.hpp"

namespace simplexlab {

/// Ordered K-tuples of positive integers with product m. Throws OverflowError
/// past 64 bits.
std::uint64_t divisor_dK(unsigned K, std::uint64_t m);

/// Exact b_K(n).
Rational coeff_bK(unsigned K, std::uint64_t n);

/// n | q_j, decided from the prime powers of n.
bool divides_qj(std::uint64_t n, unsigned j);

/// 1 + sum_{s >= 1} (s+1)^K 2^{-s}, a bound for every b_K(p^r).
double bK_prime_power_bound(unsigned K);

/// b_K(n) for n <= N_max, built by a smallest-prime-factor sieve. Stores the
/// integers n b_K(n), so every entry is exact.
class DirichletTable {
 public:
  DirichletTable(unsigned K, std::uint64_t n_max);

  unsigned K() const noexcept { return K_; }
  std::uint64_t n_max() const noexcept { return n_max_; }
  std::uint64_t numerator(std::uint64_t n) const { return num_.at(n); }
  Rational coeff(std::uint64_t n) const;
  /// Largest p^v exactly dividing n; n | q_j iff this is <= 2^j.
  std::uint64_t max_prime_power(std::uint64_t n) const { return max_pp_.at(n); }
  double coeff_double(std::uint64_t n) const {
    return static_cast<double>(num_.at(n)) / static_cast<double>(n);
  }

 private:
  unsigned K_;
  std::uint64_t n_max_;
  std::vector<std::uint64_t> num_;
  std::vector<std::uint64_t> max_pp_;
};

struct TailSum {
  unsigned K = 0;
  double s = 0;
  unsigned j = 0;
  std::uint64_t n_max = 0;
  double sum = 0;       // sum_{n <= N_max, n not | q_j} b_K(n) n^{-s}
  double bound = 0;     // 2^{j(1-s)} / j
  double ratio = 0;     // sum / bound
  double remainder_estimate = 0;  // zeta(2)^K N_max^{1-s} / (s-1)
  bool remainder_ok = false;      // remainder_estimate <= 1% of sum
};

/// Requires s > 1 and j >= 1.
TailSum tail_sum(const DirichletTable& table, double s, unsigned j);
TailSum tail_sum(unsigned K, double s, unsigned j, std::uint64_t n_max);

}  // namespace simplexlab
