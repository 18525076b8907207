#include <algorithm>
#include <random>

#include "doctest.h"
#include "simplexlab/error.hpp"
#include "simplexlab/lattice.hpp"

using namespace simplexlab;

TEST_CASE("gram matrix entries") {
  CHECK(gram_matrix(SimplexSpec::orthonormal(5, 1)) == GramMatrix(1, {1}));
  CHECK(gram_matrix(SimplexSpec::orthonormal(7, 2)) == GramMatrix(2, {1, 0, 0, 1}));
  auto s = SimplexSpec::parse("1,1;0,1,1", 7);
  CHECK(s.gram() == GramMatrix(2, {2, 1, 1, 2}));
  CHECK(s.vertex(1) == LatticeVector{0, 1, 1, 0, 0, 0, 0});
}

TEST_CASE("gram matrix rejects bad input") {
  CHECK_THROWS_AS(GramMatrix(2, {1, 2, 3, 4}), PreconditionError);
  CHECK_THROWS_AS(GramMatrix(2, {1, 2, 3}), PreconditionError);
  CHECK_THROWS_AS(SimplexSpec(3, {LatticeVector{1, 0}}), PreconditionError);
  CHECK_THROWS_AS(SimplexSpec::parse("1,x", 3), PreconditionError);
  CHECK_THROWS_AS(SimplexSpec::parse("1,0,0,0", 3), PreconditionError);
}

TEST_CASE("non-degeneracy by leading minors") {
  CHECK(is_nondegenerate(SimplexSpec::orthonormal(7, 2)));
  CHECK_FALSE(is_nondegenerate(SimplexSpec(3, {LatticeVector{1, 0, 0}, LatticeVector{2, 0, 0}})));
  GramMatrix t(2, {2, 1, 1, 2});
  CHECK(t.leading_minors() == std::vector<std::int64_t>{2, 3});
  CHECK(t.is_positive_definite());
  CHECK(GramMatrix(3, {2, -1, 0, -1, 2, -1, 0, -1, 2}).determinant() == 4);
  CHECK_FALSE(GramMatrix(2, {1, 2, 2, 1}).is_positive_definite());
}

TEST_CASE("isometry predicate examples") {
  auto s = SimplexSpec::parse("1,1;0,1,1", 7);
  CHECK(is_isometric(s.vertices(), s, RadiusClass{1}));
  std::vector<LatticeVector> perm;
  for (const auto& v : s.vertices()) perm.push_back(LatticeVector{v[2], v[0], v[1], v[6], v[5], v[4], v[3]});
  CHECK(is_isometric(perm, s, RadiusClass{1}));
  std::vector<LatticeVector> doubled;
  for (const auto& v : s.vertices()) doubled.push_back(2 * v);
  CHECK_FALSE(is_isometric(doubled, s, RadiusClass{1}));
  CHECK(is_isometric(doubled, s, RadiusClass{4}));
  CHECK_THROWS_AS(is_isometric(std::vector<LatticeVector>{s.vertex(0)}, s, RadiusClass{1}), PreconditionError);
}

TEST_CASE("admissible radii") {
  auto s = SimplexSpec::orthonormal(3, 1);
  CHECK(admissible_radii(3, s).size() == 3);
  CHECK(admissible_radii(3, s).back().lambda_sq == 3);
  CHECK(admissible_radii(1, s).size() == 1);
  CHECK(admissible_radii(0, s).empty());
}

TEST_CASE("inner-product and distance forms agree exhaustively") {
  // |coords| <= 3, k = 2, d in {2,3,4}; the d = 4 sweep alone is 7^8 tuples.
  for (std::size_t d = 2; d <= 4; ++d) {
    const SimplexSpec simplices[] = {SimplexSpec::orthonormal(d, 2), SimplexSpec::parse(d == 2 ? "1,1;0,1" : "1,1;0,1,1", d)};
    for (const auto& s : simplices) {
      for (std::int64_t lsq : {1, 5}) {
        std::vector<LatticeVector> tuple(2, LatticeVector(d));
        std::vector<Coord> flat(2 * d, -3);
        std::size_t agree = 0, isometric = 0, total = 0;
        while (true) {
          for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t c = 0; c < d; ++c) tuple[i][c] = flat[i * d + c];
          const bool a = is_isometric(tuple, s, RadiusClass{lsq});
          const bool b = is_isometric_by_distances(tuple, s, RadiusClass{lsq});
          agree += a == b;
          isometric += a;
          ++total;
          std::size_t p = 0;
          while (p < flat.size() && flat[p] == 3) flat[p++] = -3;
          if (p == flat.size()) break;
          ++flat[p];
        }
        CHECK(agree == total);
        if (lsq == 1 && d >= 3) CHECK(isometric > 0);
      }
    }
  }
}

TEST_CASE("single-vector distance form matches inner products") {
  auto s = SimplexSpec::orthonormal(4, 1);
  for (Coord a = -3; a <= 3; ++a)
    for (Coord b = -3; b <= 3; ++b) {
      std::vector<LatticeVector> t{LatticeVector{a, b, 0, 1}};
      for (std::int64_t l = 1; l <= 19; ++l)
        CHECK(is_isometric(t, s, RadiusClass{l}) == is_isometric_by_distances(t, s, RadiusClass{l}));
    }
}

TEST_CASE("isometry invariant under signed permutations") {
  std::mt19937_64 rng(7);
  auto s = SimplexSpec::parse("1,1,0,0,0;0,1,1,0,0", 5);
  std::uniform_int_distribution<Coord> coord(-3, 3);
  std::vector<std::size_t> perm{0, 1, 2, 3, 4};
  int hits = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<LatticeVector> t(2, LatticeVector(5));
    if (trial % 4 == 0) {
      t = s.vertices();
    } else {
      for (auto& v : t)
        for (std::size_t c = 0; c < 5; ++c) v[c] = coord(rng);
    }
    std::shuffle(perm.begin(), perm.end(), rng);
    Coord sign[5];
    for (auto& x : sign) x = rng() & 1 ? -1 : 1;
    std::vector<LatticeVector> img(2, LatticeVector(5));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t c = 0; c < 5; ++c) img[i][c] = sign[c] * t[i][perm[c]];
    const bool before = is_isometric(t, s, RadiusClass{1});
    CHECK(before == is_isometric(img, s, RadiusClass{1}));
    hits += before;
  }
  CHECK(hits >= 500);
}

TEST_CASE("overflow is reported") {
  LatticeVector big{INT64_MAX / 2, 2};
  CHECK_THROWS_AS(big.norm_sq(), OverflowError);
  CHECK(isqrt(99) == 9);
  CHECK(isqrt(100) == 10);
  CHECK(is_perfect_square(0));
  CHECK_FALSE(is_perfect_square(-4));
}
