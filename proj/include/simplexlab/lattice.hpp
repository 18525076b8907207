#pragma once

// Exact-integer lattice geometry: vectors in Z^d, integer simplices and their
// Gram matrices, and the isometry predicate y_i . y_j == lambda^2 t_ij.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simplexlab {

using Coord = std::int64_t;

class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t dim) : coords_(dim, 0) {}
  explicit LatticeVector(std::vector<Coord> coords) : coords_(std::move(coords)) {}
  LatticeVector(std::initializer_list<Coord> coords) : coords_(coords) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  Coord operator[](std::size_t i) const { return coords_[i]; }
  Coord& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Coord> coords() const noexcept { return coords_; }

  /// Exact |y|^2; throws OverflowError if it does not fit in 64 bits.
  std::int64_t norm_sq() const;

  static LatticeVector unit(std::size_t dim, std::size_t axis, Coord scale = 1);

  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
  friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;

 private:
  std::vector<Coord> coords_;
};

/// Exact dot product; throws PreconditionError on dimension mismatch.
std::int64_t dot(const LatticeVector& a, const LatticeVector& b);
LatticeVector operator+(const LatticeVector& a, const LatticeVector& b);
LatticeVector operator-(const LatticeVector& a, const LatticeVector& b);
LatticeVector operator*(Coord s, const LatticeVector& a);

std::string to_string(const LatticeVector& v);

class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(std::size_t k) : k_(k), entries_(k * k, 0) {}
  /// Row-major k*k entries; throws unless square and symmetric.
  GramMatrix(std::size_t k, std::vector<std::int64_t> entries);

  std::size_t size() const noexcept { return k_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * k_ + j]; }
  std::span<const std::int64_t> entries() const noexcept { return entries_; }

  /// Leading principal minors, computed exactly by fraction-free elimination.
  std::vector<std::int64_t> leading_minors() const;
  bool is_positive_definite() const;
  std::int64_t determinant() const;

  friend bool operator==(const GramMatrix&, const GramMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::int64_t> entries_;
};

/// t_ij = v_i . v_j for the given vertex list (v_0 = 0 implicit).
GramMatrix gram_matrix(std::span<const LatticeVector> vertices);

/// A radius lambda in sqrt(N), represented only by lambda^2.
struct RadiusClass {
  std::int64_t lambda_sq = 1;

  double lambda() const;
  friend auto operator<=>(const RadiusClass&, const RadiusClass&) = default;
};

/// Delta = {0, v_1, ..., v_k} subset Z^d.
class SimplexSpec {
 public:
  SimplexSpec(std::size_t dim, std::vector<LatticeVector> vertices);

  /// Parses `e-orthonormal:k` or an explicit vertex matrix "a,b,c;d,e,f".
  /// Rows shorter than `dim` are zero padded.
  static SimplexSpec parse(std::string_view descriptor, std::size_t dim);
  static SimplexSpec orthonormal(std::size_t dim, std::size_t k);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t k() const noexcept { return vertices_.size(); }
  const std::vector<LatticeVector>& vertices() const noexcept { return vertices_; }
  const LatticeVector& vertex(std::size_t i) const { return vertices_[i]; }
  const GramMatrix& gram() const noexcept { return gram_; }

  /// max_i |v_i|; lambda*Delta stays inside the ball of radius lambda * max_norm().
  double max_norm() const;
  std::string descriptor() const;

  /// Image of the simplex under a signed permutation of coordinates:
  /// coordinate c of the image is sign[c] * v[perm[c]].
  SimplexSpec signed_permuted(std::span<const std::size_t> perm, std::span<const int> sign) const;

 private:
  std::size_t dim_;
  std::vector<LatticeVector> vertices_;
  GramMatrix gram_;
};

GramMatrix gram_matrix(const SimplexSpec& simplex);
bool is_nondegenerate(const SimplexSpec& simplex);

/// y_i . y_j == lambda^2 t_ij for all i, j.
bool is_isometric(std::span<const LatticeVector> tuple, const SimplexSpec& simplex, RadiusClass radius);
/// |y_i - y_j|^2 == lambda^2 |v_i - v_j|^2 for all 0 <= i, j <= k (y_0 = v_0 = 0).
bool is_isometric_by_distances(std::span<const LatticeVector> tuple, const SimplexSpec& simplex,
                               RadiusClass radius);

std::vector<RadiusClass> admissible_radii(std::int64_t lambda_sq_max, const SimplexSpec& simplex);

/// floor(sqrt(n)) for n >= 0, exact.
std::int64_t isqrt(std::int64_t n);
bool is_perfect_square(std::int64_t n);

}  // namespace simplexlab
