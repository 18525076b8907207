#pragma once

// Truncated Siegel theta sums
//   theta_{d,k}(Z, X, E) = sum_M e^{pi i tr[(M-E) Z (M-E)^t + 2 M^t X - E^t X]},
// the Gaussian multilinear operator with kernel
//   G_{X,eps}(M) = e^{pi i tr(M (X + i eps T^-1) M^t)},
// its direct transform, and quadrature of e^{pi i tr(A X)} over I_k = [0,2]^{k(k+1)/2}.
// M is d x k with columns y_1..y_k; the rows of M are vectors in Z^k.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "simplexlab/grid.hpp"
#include "simplexlab/lattice.hpp"

namespace simplexlab {

using Complex = std::complex<double>;

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 0.0);
/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);
Eigen::MatrixXd to_eigen(const GramMatrix& t);

struct ThetaArgs {
  Eigen::MatrixXd X;         // k x k, symmetric phase
  Eigen::MatrixXd Y;         // k x k, positive definite
  Eigen::MatrixXd script_X;  // d x k
  Eigen::MatrixXd script_E;  // d x k
  double tolerance = 1e-14;  // target for the discarded tail
  double radius = 0;         // per-row truncation; 0 picks it from tolerance
};

struct ThetaValue {
  Complex value;
  double tail_bound = 0;  // rigorous bound on |theta - value|
  double radius = 0;
  std::uint64_t terms = 0;
};

/// Sum over M whose rows satisfy |m_r - e_r| <= R. The sum factors over rows.
ThetaValue theta_truncated(const ThetaArgs& args);

/// sum_{m in Z^k, |m - e| > R} e^{-pi y |m - e|^2} <= returned value, any e in R^k.
double gaussian_lattice_tail(std::size_t k, double y, double radius);

/// G_{X,eps}(M) for the d x k integer matrix whose columns are ys.
Complex gaussian_kernel(std::span<const LatticeVector> ys, const Eigen::MatrixXd& X, double eps,
                        const Eigen::MatrixXd& T_inv);

struct GaussianSumOptions {
  double tolerance = 1e-14;  // terms with Gaussian weight below this are dropped
  unsigned threads = 1;
};

/// B_{X,eps}(f_1..f_k)(x) = sum f_1(x+y_1)...f_k(x+y_k) G_{X,eps}(y_1..y_k), over
/// tuples with weight e^{-pi eps tr(M T^-1 M^t)} >= tolerance.
Complex gaussian_operator(std::span<const GridFunction> fs, const Eigen::MatrixXd& X, double eps,
                          const Eigen::MatrixXd& T, const LatticeVector& x, const GaussianSumOptions& options = {});

/// G^_{X,eps}(script_X) = sum_M G_{X,eps}(M) e^{-2 pi i tr(M^t script_X)}, summed jointly
/// over the weight region (independent of theta_truncated's row factorization).
Complex gaussian_transform(const Eigen::MatrixXd& X, double eps, const Eigen::MatrixXd& T,
                           const Eigen::MatrixXd& script_X, const GaussianSumOptions& options = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

struct QuadratureResult {
  Complex value;
  std::size_t nodes_per_axis = 0;
};

/// int_{I_k} e^{pi i tr(A X)} dX by tensor Gauss-Legendre. nodes = 0 picks the
/// count from the largest |entry| so that each factor is accurate to ~1e-12.
QuadratureResult orthogonality_identity_check(const Eigen::MatrixXi& A, std::size_t nodes = 0);

}  // namespace simplexlab
