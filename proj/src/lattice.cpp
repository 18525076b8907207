#include "simplexlab/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "simplexlab/error.hpp"

namespace simplexlab {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("lattice: 64-bit product overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("lattice: 64-bit sum overflow");
  return r;
}

std::int64_t parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw PreconditionError("simplex descriptor: bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw PreconditionError("isqrt of negative value");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  const auto r = isqrt(n);
  return r * r == n;
}

std::int64_t LatticeVector::norm_sq() const {
  std::int64_t s = 0;
  for (auto c : coords_) s = checked_add(s, checked_mul(c, c));
  return s;
}

LatticeVector LatticeVector::unit(std::size_t dim, std::size_t axis, Coord scale) {
  LatticeVector v(dim);
  v[axis] = scale;
  return v;
}

std::int64_t dot(const LatticeVector& a, const LatticeVector& b) {
  require(a.dim() == b.dim(), "dot: dimension mismatch");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
  require(a.dim() == b.dim(), "vector sum: dimension mismatch");
  LatticeVector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = checked_add(a[i], b[i]);
  return r;
}

LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
  require(a.dim() == b.dim(), "vector difference: dimension mismatch");
  LatticeVector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = checked_add(a[i], -b[i]);
  return r;
}

LatticeVector operator*(Coord s, const LatticeVector& a) {
  LatticeVector r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = checked_mul(s, a[i]);
  return r;
}

std::string to_string(const LatticeVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

GramMatrix::GramMatrix(std::size_t k, std::vector<std::int64_t> entries)
    : k_(k), entries_(std::move(entries)) {
  require(entries_.size() == k_ * k_, "gram matrix: entry count is not k*k");
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = 0; j < i; ++j)
      require((*this)(i, j) == (*this)(j, i), "gram matrix: not symmetric");
}

std::vector<std::int64_t> GramMatrix::leading_minors() const {
  // Bareiss elimination: a[p][p] is the (p+1)-th leading principal minor when
  // it becomes the pivot. For a PSD matrix a zero minor forces every larger
  // leading minor to vanish as well.
  using Wide = __int128;
  std::vector<Wide> a(entries_.begin(), entries_.end());
  std::vector<std::int64_t> minors;
  minors.reserve(k_);
  Wide prev = 1;
  for (std::size_t p = 0; p < k_; ++p) {
    const Wide pivot = a[p * k_ + p];
    if (pivot > INT64_MAX || pivot < INT64_MIN) throw OverflowError("gram matrix: minor overflow");
    minors.push_back(static_cast<std::int64_t>(pivot));
    if (pivot == 0) {
      for (std::size_t q = p + 1; q < k_; ++q) minors.push_back(0);
      break;
    }
    for (std::size_t i = p + 1; i < k_; ++i)
      for (std::size_t j = p + 1; j < k_; ++j)
        a[i * k_ + j] = (a[i * k_ + j] * pivot - a[i * k_ + p] * a[p * k_ + j]) / prev;
    prev = pivot;
  }
  return minors;
}

bool GramMatrix::is_positive_definite() const {
  if (k_ == 0) return false;
  const auto m = leading_minors();
  return std::all_of(m.begin(), m.end(), [](std::int64_t x) { return x > 0; });
}

std::int64_t GramMatrix::determinant() const {
  if (k_ == 0) return 1;
  return leading_minors().back();
}

GramMatrix gram_matrix(std::span<const LatticeVector> vertices) {
  const std::size_t k = vertices.size();
  GramMatrix g(k);
  std::vector<std::int64_t> e(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    require(vertices[i].dim() == vertices[0].dim(), "gram matrix: vertex dimension mismatch");
    for (std::size_t j = 0; j <= i; ++j) e[i * k + j] = e[j * k + i] = dot(vertices[i], vertices[j]);
  }
  return GramMatrix(k, std::move(e));
}

double RadiusClass::lambda() const { return std::sqrt(static_cast<double>(lambda_sq)); }

SimplexSpec::SimplexSpec(std::size_t dim, std::vector<LatticeVector> vertices)
    : dim_(dim), vertices_(std::move(vertices)) {
  require(dim_ >= 1, "simplex: dimension must be positive");
  require(!vertices_.empty() && vertices_.size() <= dim_, "simplex: need 1 <= k <= d");
  for (const auto& v : vertices_) require(v.dim() == dim_, "simplex: vertex dimension mismatch");
  gram_ = gram_matrix(vertices_);
}

SimplexSpec SimplexSpec::orthonormal(std::size_t dim, std::size_t k) {
  std::vector<LatticeVector> vs;
  for (std::size_t i = 0; i < k; ++i) vs.push_back(LatticeVector::unit(dim, i));
  return SimplexSpec(dim, std::move(vs));
}

SimplexSpec SimplexSpec::parse(std::string_view descriptor, std::size_t dim) {
  constexpr std::string_view preset = "e-orthonormal:";
  if (descriptor.starts_with(preset)) {
    const auto k = parse_int(descriptor.substr(preset.size()));
    require(k >= 1 && static_cast<std::size_t>(k) <= dim, "simplex: e-orthonormal needs 1 <= k <= d");
    return orthonormal(dim, static_cast<std::size_t>(k));
  }
  std::vector<LatticeVector> vs;
  for (auto row : split(descriptor, ';')) {
    auto cells = split(row, ',');
    require(cells.size() <= dim, "simplex: vertex row longer than the dimension");
    LatticeVector v(dim);
    for (std::size_t c = 0; c < cells.size(); ++c) v[c] = parse_int(cells[c]);
    vs.push_back(std::move(v));
  }
  return SimplexSpec(dim, std::move(vs));
}

double SimplexSpec::max_norm() const {
  std::int64_t m = 0;
  for (const auto& v : vertices_) m = std::max(m, v.norm_sq());
  return std::sqrt(static_cast<double>(m));
}

std::string SimplexSpec::descriptor() const {
  std::string out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += ';';
    out += to_string(vertices_[i]);
  }
  return out;
}

SimplexSpec SimplexSpec::signed_permuted(std::span<const std::size_t> perm, std::span<const int> sign) const {
  require(perm.size() == dim_ && sign.size() == dim_, "signed permutation: size mismatch");
  std::vector<LatticeVector> vs;
  for (const auto& v : vertices_) {
    LatticeVector w(dim_);
    for (std::size_t c = 0; c < dim_; ++c) w[c] = sign[c] * v[perm[c]];
    vs.push_back(std::move(w));
  }
  return SimplexSpec(dim_, std::move(vs));
}

GramMatrix gram_matrix(const SimplexSpec& simplex) { return simplex.gram(); }

bool is_nondegenerate(const SimplexSpec& simplex) { return simplex.gram().is_positive_definite(); }

bool is_isometric(std::span<const LatticeVector> tuple, const SimplexSpec& simplex, RadiusClass radius) {
  require(tuple.size() == simplex.k(), "is_isometric: tuple length differs from k");
  const auto& t = simplex.gram();
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    require(tuple[i].dim() == simplex.dim(), "is_isometric: dimension mismatch");
    for (std::size_t j = 0; j <= i; ++j)
      if (dot(tuple[i], tuple[j]) != checked_mul(radius.lambda_sq, t(i, j))) return false;
  }
  return true;
}

bool is_isometric_by_distances(std::span<const LatticeVector> tuple, const SimplexSpec& simplex,
                               RadiusClass radius) {
  require(tuple.size() == simplex.k(), "is_isometric: tuple length differs from k");
  const std::size_t k = tuple.size();
  const LatticeVector zero(simplex.dim());
  auto y = [&](std::size_t i) -> const LatticeVector& { return i == 0 ? zero : tuple[i - 1]; };
  auto v = [&](std::size_t i) -> const LatticeVector& { return i == 0 ? zero : simplex.vertex(i - 1); };
  for (std::size_t i = 0; i < tuple.size(); ++i)
    require(tuple[i].dim() == simplex.dim(), "is_isometric: dimension mismatch");
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if ((y(i) - y(j)).norm_sq() != checked_mul(radius.lambda_sq, (v(i) - v(j)).norm_sq())) return false;
  return true;
}

std::vector<RadiusClass> admissible_radii(std::int64_t lambda_sq_max, const SimplexSpec&) {
  // Integer Gram entries make every lambda^2 in 1..bound admissible.
  std::vector<RadiusClass> out;
  for (std::int64_t n = 1; n <= lambda_sq_max; ++n) out.push_back(RadiusClass{n});
  return out;
}

}  // namespace simplexlab
