#pragma once

// Major-arc regions Omega, grid-cube kernels chi_{q,L}, the U^1_{q,L} norm,
// eta-uniform distribution of sets, and the generalized von Neumann probe.
// Transforms use f^(xi) = sum_x f(x) e^{-2 pi i x.xi}.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simplexlab/enumeration.hpp"
#include "simplexlab/grid.hpp"
#include "simplexlab/rational.hpp"

namespace simplexlab {

/// lcm{1, ..., n}.
BigInt lcm_range(std::uint64_t n);
/// q_eta = lcm{1 <= q <= eta^-2}.
BigInt q_eta(double eta);
/// q_j = lcm{1 <= q <= 2^j}.
BigInt q_j(unsigned j);

/// Exact value of a finite double.
Rational exact_rational(double x);
/// Torus distance from xi to q^-1 Z, exact.
Rational grid_distance(const Rational& xi, const BigInt& q);

struct FreqParams {
  enum class Variant { eta_L, j_l };
  Variant variant = Variant::eta_L;
  double eta = 0.5;
  BigInt L = 12;
  unsigned j = 0;
  unsigned l = 1;

  static FreqParams eta_L(double eta, BigInt L);
  static FreqParams j_l(unsigned j, unsigned l);

  /// Throws PreconditionError unless L >= q_eta (variant A) or 2^j <= l (variant B).
  void validate() const;
  /// q_eta or q_j.
  BigInt modulus() const;
  /// 1/L or 2^{j-l}.
  Rational radius() const;
  std::string describe() const;
};

/// Every coordinate lies within radius() of (modulus()^-1 Z), on the torus.
bool omega_contains(std::span<const Rational> xi, const FreqParams& params);
/// Float input: boundary comparisons get 1e-12 slack.
bool omega_contains(std::span<const double> xi, const FreqParams& params);
/// One coordinate, exact.
bool omega_contains_1d(const Rational& xi, const FreqParams& params);

/// Zeroes the DFT coefficients of f (periodic on its own box) whose frequency
/// m/N lies in Omega and transforms back.
GridFunction project_out_omega(const GridFunction& f, const FreqParams& params);

enum class KernelTag : std::uint8_t { none = 0, chi = 1, psi = 2, Psi = 3, DeltaPsi = 4 };
const char* kernel_tag_name(KernelTag tag);

/// Values of a one-dimensional factor on lower, lower+1, ...
struct KernelFactor {
  Coord lower = 0;
  std::vector<double> values;
  double at(Coord x) const {
    const Coord i = x - lower;
    return (i < 0 || i >= static_cast<Coord>(values.size())) ? 0.0 : values[static_cast<std::size_t>(i)];
  }
};

/// coef * prod_c factor(x_c).
struct SeparableTerm {
  double coef = 1;
  KernelFactor factor;
};

/// A finitely supported kernel on Z^d written as a short sum of separable
/// products (one term for chi, psi and Psi; two for DeltaPsi).
struct Kernel {
  KernelTag tag = KernelTag::none;
  std::size_t dim = 0;
  std::vector<SeparableTerm> terms;

  double at(std::span<const Coord> x) const;
  /// Smallest box holding the support of every factor.
  Box support_box() const;
  GridFunction materialize() const;
  GridFunction materialize(const Box& window) const;
};

/// chi_{q,L}: (q/L)^d on (qZ)^d cap [-L/2, L/2)^d. Requires 1 <= q <= L, q | L.
Kernel chi_kernel(std::uint64_t q, std::uint64_t L, std::size_t d);
/// Mass of chi_{q,L} in exact arithmetic (always 1 under the preconditions).
Rational chi_mass_exact(std::uint64_t q, std::uint64_t L, std::size_t d);
/// chi^_{q,L}(xi) = prod_c (q/L) sum_{n} e^{-2 pi i n xi_c}.
double chi_hat(std::uint64_t q, std::uint64_t L, std::span<const double> xi);

/// (f * K)(t) for t in out, by separable one-dimensional passes.
GridFunction convolve(const GridFunction& f, const Kernel& kernel, const Box& out);

struct U1Norm {
  double literal = 0;    // (|Q|^-1 sum_t |f*chi(t)|^2)^1/2 over every t
  double interior = 0;   // mean over t whose whole window lies in Q
  std::uint64_t interior_sites = 0;
};

/// f is restricted to Q before convolving. Requires q | L and q <= L <= side(Q).
U1Norm u1_norm(const GridFunction& f, const Box& Q, std::uint64_t q, std::uint64_t L);
/// Literal variant by Parseval on a zero-padded DFT grid with the analytic chi^.
double u1_norm_fourier(const GridFunction& f, const Box& Q, std::uint64_t q, std::uint64_t L);

struct UniformityReport {
  bool is_uniform = false;
  std::vector<Coord> worst_residue;  // s in {1..q}^d
  double ratio = 0;                  // max_s density(A | s + qZ^d) / density(A)
  double threshold = 0;              // 1 + eta^4
  double density = 0;
  std::uint64_t q = 0;
  std::uint64_t residues = 0;
};

UniformityReport uniformity_test(const LatticeSet& A, double eta);

struct VonNeumannOptions {
  EnumerationOptions enumeration;
};

struct VonNeumannResult {
  double lhs = 0;
  double min_u1 = 0;                 // interior variant, min over inputs
  std::vector<double> u1_interior;   // per input
  std::vector<double> u1_literal;
  double measured_constant = 0;      // (lhs - min_u1) / eta
  std::int64_t lambda_sq_lo = 0, lambda_sq_hi = 0;
  std::vector<std::int64_t> skipped;
  std::uint64_t q = 0;
};

/// lhs = |Q|^-1 sum_x sup_{eta^-3 L <= lambda <= eta^3 N} |A(f)(x)|, rhs side
/// min_j ||f_j||_{U^1_{q_eta, L}(Q)}. Requires N >= eta^-6 L, eta in (0, 1].
VonNeumannResult von_neumann_probe(std::span<const GridFunction> fs, const Box& Q, const SimplexSpec& simplex,
                                   double eta, std::uint64_t L, const VonNeumannOptions& options = {});

}  // namespace simplexlab
