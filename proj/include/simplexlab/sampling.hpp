#pragma once

// Smooth sampling kernels psi_{q,L}, Psi_{l,j} = psi_{q_j, 2^{l-j}} and their
// differences, the telescoping decomposition and the almost-orthogonality probe.
//
// The frequency profile is h(t) = 1 for |t| <= 1/2, (1 - cos 2 pi t)/2 for
// 1/2 <= |t| <= 1, 0 beyond; the d-dimensional profile is the product. The
// kernels are realized on the period-P torus (P a multiple of q and of 4L), so
// their DFT at m/P is exactly sum_ell h(L(m/P - ell/q)).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simplexlab/fourier.hpp"
#include "simplexlab/grid.hpp"

namespace simplexlab {

double psi_profile_1d(double t);
double psi_profile(std::span<const double> xi);

/// J_l = floor(log2 l) - 2. Requires l >= 4.
unsigned J_l(unsigned l);
/// lcm(q_{J_l}, 2^{l+2}); throws ResourceLimitError above 2^26.
std::uint64_t sampling_period(unsigned l);

/// psi_{q,L}^(xi) = sum_ell h(L(xi - ell/q)) per axis, evaluated exactly from the
/// torus distance to q^-1 Z.
double psi_hat(std::uint64_t q, std::uint64_t L, std::span<const double> xi);
/// Psi_{l,j}^ analytic; any j with q_j < 2^63, no J_l bound.
double Psi_hat(unsigned l, unsigned j, std::span<const double> xi);
double DeltaPsi_hat(unsigned l, unsigned j, std::span<const double> xi);

/// psi_{q,L} on the period-P torus, window [-P/2, P/2). Requires q | P, 4L | P, L > q.
Kernel psi_kernel(std::uint64_t q, std::uint64_t L, std::size_t d, std::uint64_t period);
/// Psi_{l,j}, 0 <= j <= J_l, period sampling_period(l).
Kernel psi_sampling(unsigned l, unsigned j, std::size_t d);
/// Psi_{l,j+1} - Psi_{l,j}, 0 <= j < J_l.
Kernel delta_psi(unsigned l, unsigned j, std::size_t d);

struct LeakReport {
  std::uint64_t period = 0;
  double max_outside = 0;     // max |Psi^| at m/P outside Omega_{j,l}, d-dimensional
  double max_outside_1d = 0;
  double peak_error = 0;      // max |Psi^(ell/q_j) - 1| over grid rationals m/P
  double mass_error = 0;      // |sum_x Psi(x) - 1|
};

/// Transforms the realized 1D factor of Psi_{l,j} with one FFT of length P and
/// combines axes by separability.
LeakReport frequency_leak(unsigned l, unsigned j, std::size_t d);

struct MeshPoint {
  std::vector<double> xi;
  double magnitude = 0;
};

/// |Psi_{l,j}^| on the tensor mesh {m/n}^d, m < n.
std::vector<MeshPoint> psi_hat_mesh(unsigned l, unsigned j, std::size_t d, std::size_t n);
/// Columns xi_1..xi_d, magnitude.
std::string mesh_csv(std::span<const MeshPoint> mesh);

struct Telescoping {
  unsigned l = 0;
  unsigned J = 0;
  std::vector<GridFunction> parts;  // f*Psi_{l,0}, f*DeltaPsi_{l,j} (j < J), f - f*Psi_{l,J}
  double reconstruction_error = 0;  // max |sum parts - f| / max(|f|_inf, tiny)
};

/// Parts live on f's box. Requires l >= 8.
Telescoping telescoping_decompose(const GridFunction& f, unsigned l);

struct OrthogonalityResult {
  unsigned j = 0;
  unsigned l_max = 0;
  double max_sum = 0;
  unsigned l_min = 0;
  unsigned terms = 0;  // 0 when l_max < l_min
  std::size_t argmax = 0;
  std::vector<double> sums;  // per sample
};

/// max over samples of sum_{l_min <= l <= l_max} |DeltaPsi_{l,j}^(xi)|^2, analytic
/// transforms. l_min = 0 means 2^{j+3}, the first l with j + 1 <= J_l (smaller l
/// give L <= q where psi_{q,L} is undefined). l_min must be >= 2^j.
OrthogonalityResult orthogonality_probe(unsigned j, unsigned l_max, std::span<const std::vector<double>> samples,
                                        unsigned l_min = 0);

/// Seeded uniform points of T^d plus the points of (q_{j+1}^-1 Z)^d with
/// numerators 0..grid-1 on each axis.
std::vector<std::vector<double>> orthogonality_samples(unsigned j, std::size_t d, std::size_t random_count,
                                                       std::uint64_t seed, std::size_t grid = 3);

}  // namespace simplexlab
