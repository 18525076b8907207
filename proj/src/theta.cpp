#include "simplexlab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simplexlab/error.hpp"
#include "simplexlab/parallel.hpp"

namespace simplexlab {

namespace {

// Integer points m of Z^k with |m - e| <= R.
std::vector<Eigen::VectorXd> ball_points(const Eigen::VectorXd& e, double R) {
  const std::size_t k = static_cast<std::size_t>(e.size());
  std::vector<Coord> lo(k), hi(k), m(k);
  for (std::size_t c = 0; c < k; ++c) {
    lo[c] = static_cast<Coord>(std::ceil(e[c] - R));
    hi[c] = static_cast<Coord>(std::floor(e[c] + R));
    if (lo[c] > hi[c]) return {};
    m[c] = lo[c];
  }
  std::vector<Eigen::VectorXd> out;
  while (true) {
    Eigen::VectorXd v(k);
    for (std::size_t c = 0; c < k; ++c) v[c] = static_cast<double>(m[c]);
    if ((v - e).squaredNorm() <= R * R) out.push_back(v);
    std::size_t c = 0;
    while (c < k && m[c] == hi[c]) m[c] = lo[c], ++c;
    if (c == k) return out;
    ++m[c];
  }
}

// Integer row vectors with m Q m^t <= B, Q positive definite.
std::vector<Eigen::VectorXd> ellipsoid_points(const Eigen::MatrixXd& Q, double B) {
  const double mu = min_eigenvalue(Q);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(Q.rows());
  std::vector<Eigen::VectorXd> out;
  for (auto& v : ball_points(zero, std::sqrt(B / mu)))
    if (v.dot(Q * v) <= B) out.push_back(v);
  return out;
}

void check_square_symmetric(const Eigen::MatrixXd& m, const char* what) {
  require(m.rows() == m.cols() && m.rows() >= 1, what);
  require(is_symmetric(m, 1e-12), what);
}

}  // namespace

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd to_eigen(const GramMatrix& t) {
  const auto k = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = static_cast<double>(t(i, j));
  return m;
}

double gaussian_lattice_tail(std::size_t k, double y, double radius) {
  require(k >= 1 && y > 0, "gaussian_lattice_tail: need k >= 1, y > 0");
  const double a = std::sqrt(static_cast<double>(k)) / 2;
  const double u0 = radius - 2 * a;
  if (u0 < 0) return std::numeric_limits<double>::infinity();
  const double c = M_PI * y;
  const double g = std::exp(-c * u0 * u0);
  // I_n = int_{u0}^inf u^n e^{-c u^2} du
  std::vector<double> I(k);
  I[0] = 0.5 * std::sqrt(M_PI / c) * std::erfc(std::sqrt(c) * u0);
  if (k > 1) I[1] = g / (2 * c);
  for (std::size_t n = 2; n < k; ++n) I[n] = (std::pow(u0, static_cast<double>(n - 1)) * g + (n - 1) * I[n - 2]) / (2 * c);
  double s = 0, binom = 1;
  for (std::size_t n = 0; n < k; ++n) {
    s += binom * std::pow(a, static_cast<double>(k - 1 - n)) * I[n];
    binom = binom * static_cast<double>(k - 1 - n) / static_cast<double>(n + 1);
  }
  const double sphere = 2 * std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0);
  return sphere * s;
}

ThetaValue theta_truncated(const ThetaArgs& args) {
  check_square_symmetric(args.X, "theta: X must be square and symmetric");
  check_square_symmetric(args.Y, "theta: Y must be square and symmetric");
  const auto k = args.X.rows();
  const auto d = args.script_X.rows();
  require(args.Y.rows() == k && args.script_X.cols() == k, "theta: shape mismatch");
  require(args.script_E.rows() == d && args.script_E.cols() == k, "theta: shape mismatch");
  require(d >= 1, "theta: d must be >= 1");
  require(args.tolerance > 0 && args.tolerance < 1, "theta: tolerance must lie in (0, 1)");
  const double y = min_eigenvalue(args.Y);
  require(y > 0, "theta: Y must be positive definite");

  double R = args.radius;
  if (R <= 0) R = std::ceil(std::sqrt(std::log(1 / args.tolerance) / (M_PI * y))) + 1;
  R = std::max(R, std::sqrt(static_cast<double>(k)));

  ThetaValue out;
  for (;;) {
    std::vector<Complex> rows;
    out.terms = 1;
    for (Eigen::Index r = 0; r < d; ++r) {
      const Eigen::VectorXd e = args.script_E.row(r).transpose();
      const Eigen::VectorXd xi = args.script_X.row(r).transpose();
      const auto pts = ball_points(e, R);
      Complex s = 0;
      for (const auto& m : pts) {
        const Eigen::VectorXd u = m - e;
        const double phase = u.dot(args.X * u) + 2 * m.dot(xi) - e.dot(xi);
        s += std::exp(-M_PI * u.dot(args.Y * u)) * std::polar(1.0, M_PI * phase);
      }
      rows.push_back(s);
      out.terms *= pts.size();
    }
    const double t = gaussian_lattice_tail(static_cast<std::size_t>(k), y, R);
    // prod(|s| + t) - prod |s|, accumulated without cancellation
    double diff = 0, without = 1;
    out.value = 1;
    for (const auto& s : rows) {
      out.value *= s;
      diff = diff * (std::abs(s) + t) + without * t;
      without *= std::abs(s);
    }
    out.tail_bound = diff;
    out.radius = R;
    if (out.tail_bound <= args.tolerance || args.radius > 0) return out;
    if (R > 1e4) throw ResourceLimitError("theta: truncation radius exceeds 1e4");
    R += 1;
  }
}

Complex gaussian_kernel(std::span<const LatticeVector> ys, const Eigen::MatrixXd& X, double eps,
                        const Eigen::MatrixXd& T_inv) {
  const std::size_t k = ys.size();
  double re = 0, im = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto g = static_cast<double>(dot(ys[i], ys[j]));
      re += X(i, j) * g;
      im += T_inv(i, j) * g;
    }
  return std::exp(-M_PI * eps * im) * std::polar(1.0, M_PI * re);
}

Complex gaussian_operator(std::span<const GridFunction> fs, const Eigen::MatrixXd& X, double eps,
                          const Eigen::MatrixXd& T, const LatticeVector& x, const GaussianSumOptions& options) {
  require(eps > 0, "gaussian_operator: eps must be positive");
  check_square_symmetric(X, "gaussian_operator: X must be square and symmetric");
  check_square_symmetric(T, "gaussian_operator: T must be square and symmetric");
  const std::size_t k = fs.size();
  require(k >= 1 && static_cast<std::size_t>(X.rows()) == k && static_cast<std::size_t>(T.rows()) == k,
          "gaussian_operator: need k inputs matching X and T");
  require(min_eigenvalue(T) > 0, "gaussian_operator: T must be positive definite");
  require(options.tolerance > 0 && options.tolerance < 1, "gaussian_operator: tolerance must lie in (0, 1)");
  const std::size_t d = x.dim();
  const Eigen::MatrixXd Tinv = T.inverse();
  const double B = std::log(1 / options.tolerance) / (M_PI * eps);
  const double reach = std::sqrt(B / min_eigenvalue(Tinv));

  // Candidate columns: y_i with f_i(x + y_i) != 0 and |y_i| <= reach.
  std::vector<std::vector<LatticeVector>> cand(k);
  std::vector<std::vector<double>> val(k);
  for (std::size_t i = 0; i < k; ++i) {
    require(fs[i].dim() == d, "gaussian_operator: dimension mismatch");
    const auto v = fs[i].values();
    for (std::size_t p = 0; p < v.size(); ++p) {
      if (v[p] == 0.0) continue;
      const LatticeVector y = fs[i].box().point(p) - x;
      if (static_cast<double>(y.norm_sq()) > reach * reach) continue;
      cand[i].push_back(y);
      val[i].push_back(v[p]);
    }
    if (cand[i].empty()) return 0.0;
  }
  std::vector<std::size_t> idx(k, 0);
  std::vector<LatticeVector> ys(k);
  Complex sum = 0;
  while (true) {
    double w = 0, prod = 1;
    for (std::size_t i = 0; i < k; ++i) {
      ys[i] = cand[i][idx[i]];
      prod *= val[i][idx[i]];
    }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) w += Tinv(i, j) * static_cast<double>(dot(ys[i], ys[j]));
    if (w <= B) sum += prod * gaussian_kernel(ys, X, eps, Tinv);
    std::size_t c = 0;
    while (c < k && idx[c] + 1 == cand[c].size()) idx[c++] = 0;
    if (c == k) return sum;
    ++idx[c];
  }
}

Complex gaussian_transform(const Eigen::MatrixXd& X, double eps, const Eigen::MatrixXd& T,
                           const Eigen::MatrixXd& script_X, const GaussianSumOptions& options) {
  require(eps > 0, "gaussian_transform: eps must be positive");
  check_square_symmetric(X, "gaussian_transform: X must be square and symmetric");
  check_square_symmetric(T, "gaussian_transform: T must be square and symmetric");
  require(T.rows() == X.rows() && script_X.cols() == X.rows() && script_X.rows() >= 1,
          "gaussian_transform: shape mismatch");
  require(min_eigenvalue(T) > 0, "gaussian_transform: T must be positive definite");
  require(options.tolerance > 0 && options.tolerance < 1, "gaussian_transform: tolerance must lie in (0, 1)");
  const Eigen::MatrixXd Tinv = T.inverse();
  const double B = std::log(1 / options.tolerance) / (M_PI * eps);
  auto rows = ellipsoid_points(Tinv, B);
  std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) { return a.dot(Tinv * a) < b.dot(Tinv * b); });
  std::vector<double> q(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) q[i] = rows[i].dot(Tinv * rows[i]);
  const auto d = static_cast<std::size_t>(script_X.rows());

  // phase[r][i]: contribution of row candidate i placed at row r
  std::vector<std::vector<Complex>> term(d, std::vector<Complex>(rows.size()));
  for (std::size_t r = 0; r < d; ++r) {
    const Eigen::VectorXd xi = script_X.row(static_cast<Eigen::Index>(r)).transpose();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& m = rows[i];
      term[r][i] = std::exp(-M_PI * eps * q[i]) * std::polar(1.0, M_PI * m.dot(X * m) - 2 * M_PI * m.dot(xi));
    }
  }
  // Joint region sum_r q(m_r) <= B, rows sorted by q so each level stops early.
  auto rec = [&](auto&& self, std::size_t r, double budget) -> Complex {
    Complex s = 0;
    for (std::size_t i = 0; i < rows.size() && q[i] <= budget; ++i)
      s += r + 1 == d ? term[r][i] : term[r][i] * self(self, r + 1, budget - q[i]);
    return s;
  };
  std::vector<Complex> parts(rows.size());
  parallel_for(rows.size(), resolve_threads(options.threads), [&](std::size_t i) {
    if (q[i] > B) return;
    parts[i] = d == 1 ? term[0][i] : term[0][i] * rec(rec, 1, B - q[i]);
  });
  Complex s = 0;
  for (const auto& p : parts) s += p;
  return s;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, "gauss_legendre: need n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (std::size_t m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1) * x * p1 - (m - 1.0) * p0) / static_cast<double>(m);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (std::size_t m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1) * x * p1 - (m - 1.0) * p0) / static_cast<double>(m);
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
  }
}

QuadratureResult orthogonality_identity_check(const Eigen::MatrixXi& A, std::size_t nodes) {
  require(A.rows() == A.cols() && A.rows() >= 1, "orthogonality_identity_check: A must be square");
  const auto k = A.rows();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) require(A(i, j) == A(j, i), "orthogonality_identity_check: A must be symmetric");
  // tr(AX) = sum_i a_ii x_ii + 2 sum_{i<j} a_ij x_ij
  std::vector<double> coef;
  double cmax = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j) {
      coef.push_back((i == j ? 1.0 : 2.0) * A(i, j));
      cmax = std::max(cmax, std::abs(coef.back()));
    }
  if (nodes == 0) {
    // smallest n with omega^{2n} / (2n)! < 1e-15 on the half-length-1 interval
    const double omega = M_PI * cmax;
    nodes = 4;
    while (2.0 * nodes * std::log(std::max(omega, 1e-300)) - std::lgamma(2.0 * nodes + 1) > std::log(1e-15)) ++nodes;
  }
  std::vector<double> t, w;
  gauss_legendre(nodes, t, w);
  QuadratureResult r;
  r.nodes_per_axis = nodes;
  r.value = 1;
  // Tensor rule over separable factors: the product of the 1D rules.
  for (double c : coef) {
    Complex s = 0;
    for (std::size_t i = 0; i < nodes; ++i) s += w[i] * std::polar(1.0, M_PI * c * (1 + t[i]));
    r.value *= s;
  }
  return r;
}

}  // namespace simplexlab
