#include <random>
#include <set>

#include "doctest.h"
#include "simplexlab/enumeration.hpp"
#include "simplexlab/error.hpp"

using namespace simplexlab;

namespace {

// Plain box scan, used only to check sphere_points.
std::uint64_t box_sphere_count(std::size_t d, std::int64_t n) {
  const Coord B = isqrt(n);
  std::vector<Coord> y(d, -B);
  std::uint64_t c = 0;
  while (true) {
    std::int64_t s = 0;
    for (auto v : y) s += v * v;
    c += s == n;
    std::size_t i = 0;
    while (i < d && y[i] == B) y[i++] = -B;
    if (i == d) return c;
    ++y[i];
  }
}

}  // namespace

TEST_CASE("sphere points") {
  CHECK(sphere_points(5, 1).points.size() == 10);
  auto s2 = sphere_points(5, 2);
  CHECK(s2.points.size() == 40);
  CHECK(s2.points.size() == box_sphere_count(5, 2));
  auto s0 = sphere_points(4, 0);
  REQUIRE(s0.points.size() == 1);
  CHECK(s0.points[0] == LatticeVector(4));
  for (std::size_t d = 1; d <= 5; ++d)
    for (std::int64_t n = 0; n <= 12; ++n) {
      auto s = sphere_points(d, n);
      CHECK(s.points.size() == box_sphere_count(d, n));
      CHECK(std::is_sorted(s.points.begin(), s.points.end()));
      CHECK(std::adjacent_find(s.points.begin(), s.points.end()) == s.points.end());
      for (const auto& p : s.points) CHECK(p.norm_sq() == n);
    }
  CHECK_THROWS_AS(sphere_points(5, 4, 20), ResourceLimitError);
}

TEST_CASE("embedding counts") {
  CHECK(count_embeddings(SimplexSpec::orthonormal(5, 1), RadiusClass{1}) == 10);
  CHECK(count_embeddings(SimplexSpec::orthonormal(7, 2), RadiusClass{1}) == 168);
  CHECK(count_embeddings(SimplexSpec::orthonormal(4, 1), RadiusClass{3}) == 32);
  CHECK(brute_force_embeddings(SimplexSpec::orthonormal(3, 1), RadiusClass{1}) == 6);
  CHECK(brute_force_embeddings(SimplexSpec::orthonormal(5, 2), RadiusClass{1}) == 80);
  CHECK(brute_force_embeddings(SimplexSpec::orthonormal(7, 2), RadiusClass{1}) == 168);
  CHECK(brute_force_embeddings(SimplexSpec::orthonormal(4, 1), RadiusClass{3}) == 32);
}

TEST_CASE("sphere and k=1 counts coincide") {
  for (std::size_t d = 2; d <= 6; ++d)
    for (std::int64_t n = 1; n <= 15; ++n)
      CHECK(sphere_points(d, n).points.size() == count_embeddings(SimplexSpec::orthonormal(d, 1), RadiusClass{n}));
}

TEST_CASE("oracle agreement on random small simplices") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Coord> c(-2, 2);
  int tested = 0;
  while (tested < 25) {
    const std::size_t d = 3 + rng() % 2;
    const std::size_t k = 1 + rng() % 2;
    std::vector<LatticeVector> vs(k, LatticeVector(d));
    for (auto& v : vs)
      for (std::size_t i = 0; i < d; ++i) v[i] = c(rng);
    SimplexSpec s(d, vs);
    if (!is_nondegenerate(s)) continue;
    std::int64_t maxdiag = 0;
    for (std::size_t i = 0; i < k; ++i) maxdiag = std::max(maxdiag, s.gram()(i, i));
    if (maxdiag > 6) continue;
    const std::int64_t lsq = 1 + static_cast<std::int64_t>(rng() % 3);
    INFO("simplex " << s.descriptor() << " d=" << d << " lambda^2=" << lsq);
    CHECK(count_embeddings(s, RadiusClass{lsq}) == brute_force_embeddings(s, RadiusClass{lsq}));
    ++tested;
  }
}

TEST_CASE("non-orthogonal gram in higher dimension") {
  auto s = SimplexSpec::parse("1,1;0,1,1", 5);
  for (std::int64_t lsq = 1; lsq <= 4; ++lsq)
    CHECK(count_embeddings(s, RadiusClass{lsq}) == brute_force_embeddings(s, RadiusClass{lsq}));
  auto s3 = SimplexSpec::parse("1;0,1;0,0,1", 4);
  CHECK(count_embeddings(s3, RadiusClass{1}) == 8 * 6 * 4);
  CHECK(count_embeddings(s3, RadiusClass{2}) == brute_force_embeddings(s3, RadiusClass{2}, 2'000'000'000));
}

TEST_CASE("list mode emits isometric tuples") {
  auto s = SimplexSpec::parse("1,1;0,1,1", 5);
  EnumerationOptions opt;
  opt.list_cap = 1'000'000;
  auto e = simplex_embeddings(s, RadiusClass{3}, EnumerationMode::list, opt);
  CHECK(e.count == e.tuples.size());
  CHECK(e.count == count_embeddings(s, RadiusClass{3}));
  std::set<std::vector<LatticeVector>> uniq(e.tuples.begin(), e.tuples.end());
  CHECK(uniq.size() == e.tuples.size());
  for (const auto& t : e.tuples) CHECK(is_isometric(t, s, RadiusClass{3}));
  CHECK_THROWS_AS(simplex_embeddings(s, RadiusClass{3}, EnumerationMode::list), PreconditionError);
  opt.list_cap = 5;
  CHECK_THROWS_AS(simplex_embeddings(s, RadiusClass{3}, EnumerationMode::list, opt), ResourceLimitError);
}

TEST_CASE("format tuple") {
  std::vector<LatticeVector> t{LatticeVector{1, -2}, LatticeVector{0, 3}};
  CHECK(format_tuple(t) == "1,-2;0,3");
}

TEST_CASE("count invariant under signed permutations of the simplex") {
  std::mt19937_64 rng(5);
  auto s = SimplexSpec::parse("1,1,0,0,0,0;0,1,1,0,0,0", 6);
  const auto base = count_embeddings(s, RadiusClass{4});
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::size_t> perm{0, 1, 2, 3, 4, 5};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> sign(6);
    for (auto& x : sign) x = rng() & 1 ? 1 : -1;
    CHECK(count_embeddings(s.signed_permuted(perm, sign), RadiusClass{4}) == base);
  }
}

TEST_CASE("count invariant under partition schedule and threads") {
  auto s = SimplexSpec::orthonormal(6, 2);
  EnumerationOptions base;
  const auto ref = simplex_embeddings(s, RadiusClass{5}, EnumerationMode::count, base);
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    EnumerationOptions o;
    o.partition_shuffle_seed = seed;
    o.chunk = 3;
    o.threads = 3;
    auto e = simplex_embeddings(s, RadiusClass{5}, EnumerationMode::count, o);
    CHECK(e.count == ref.count);
    CHECK(e.nodes_visited == ref.nodes_visited);
  }
}

TEST_CASE("node cap raises resource limit") {
  EnumerationOptions o;
  o.node_cap = 100;
  CHECK_THROWS_AS(count_embeddings(SimplexSpec::orthonormal(7, 2), RadiusClass{9}, o), ResourceLimitError);
}

TEST_CASE("preconditions") {
  SimplexSpec degenerate(3, {LatticeVector{1, 0, 0}, LatticeVector{2, 0, 0}});
  CHECK_THROWS_AS(count_embeddings(degenerate, RadiusClass{1}), PreconditionError);
  CHECK_THROWS_AS(count_embeddings(SimplexSpec::orthonormal(3, 1), RadiusClass{0}), PreconditionError);
  std::vector<std::int64_t> one{4};
  CHECK_THROWS_AS(count_scaling_fit(SimplexSpec::orthonormal(5, 1), one), PreconditionError);
  std::vector<std::int64_t> three{4, 5, 6};
  CHECK_THROWS_AS(count_scaling_fit(SimplexSpec::orthonormal(4, 1), three), PreconditionError);
}

TEST_CASE("scaling fit for the sphere") {
  std::vector<std::int64_t> radii;
  for (std::int64_t n = 4; n <= 100; ++n) radii.push_back(n);
  auto fit = count_scaling_fit(SimplexSpec::orthonormal(5, 1), radii);
  CHECK(fit.predicted_exponent == doctest::Approx(3));
  CHECK(std::abs(fit.slope - 3) < 0.4);
  CHECK(fit.points.size() == radii.size());
  CHECK(fit.constant_min > 0);
  CHECK(fit.constant_min <= fit.constant_max);
}

TEST_CASE("pinned counts") {
  auto s = SimplexSpec::orthonormal(5, 1);
  LatticeSet full(Box::cube(5, -4, 9));
  for (std::size_t i = 0; i < full.box().volume(); ++i) full.set_index(i, true);
  const LatticeVector x(5);
  CHECK(pinned_count(full, x, s, RadiusClass{4}) == count_embeddings(s, RadiusClass{4}));
  CHECK(count_embeddings(s, RadiusClass{4}) == 90);
  LatticeSet empty(Box::cube(5, -4, 9));
  CHECK(pinned_count(empty, x, s, RadiusClass{4}) == 0);
  LatticeSet even(Box::cube(5, -4, 9));
  for (std::size_t i = 0; i < even.box().volume(); ++i) {
    auto p = even.box().point(i);
    bool e = true;
    for (std::size_t c = 0; c < 5; ++c) e = e && p[c] % 2 == 0;
    even.set_index(i, e);
  }
  CHECK(pinned_count(even, x, s, RadiusClass{4}) == 10);
  CHECK_THROWS_AS(pinned_count(even, LatticeVector{3, 0, 0, 0, 0}, s, RadiusClass{4}), PreconditionError);
  auto s2 = SimplexSpec::orthonormal(5, 2);
  CHECK(pinned_count(full, x, s2, RadiusClass{2}) == count_embeddings(s2, RadiusClass{2}));
}
