#include <cmath>
#include <random>

#include "doctest.h"
#include "simplexlab/averaging.hpp"
#include "simplexlab/error.hpp"
#include "simplexlab/fourier.hpp"
#include "simplexlab/simd/kernels.hpp"

using namespace simplexlab;

namespace {

GridFunction constant(const Box& box, double c) { return GridFunction(box, c); }

GridFunction random_function(const Box& box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  GridFunction f(box);
  for (auto& v : f.values()) v = u(rng);
  return f;
}

LatticeSet random_set(const Box& box, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(p);
  LatticeSet A(box);
  for (std::size_t i = 0; i < box.volume(); ++i) A.set_index(i, b(rng));
  return A;
}

}  // namespace

TEST_CASE("normalization and constants") {
  const auto s = SimplexSpec::orthonormal(7, 2);
  const Box box = Box::centered(7, 7);
  const LatticeVector x(7);
  std::vector<GridFunction> ones{constant(box, 1), constant(box, 1)};
  CHECK(multilinear_average(ones, s, RadiusClass{1}, x) == doctest::Approx(1).epsilon(1e-15));
  std::vector<GridFunction> ds{constant(box, 0.3), constant(box, 0.3)};
  CHECK(multilinear_average(ds, s, RadiusClass{2}, x) == doctest::Approx(0.09).epsilon(1e-12));
  auto mv = maximal_function(ds, s, 1, 4, x);
  CHECK(mv.value == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("parity example") {
  const auto s = SimplexSpec::orthonormal(5, 1);
  const Box box = Box::centered(5, 9);
  LatticeSet even(box);
  for_each_point(box, [&](std::span<const Coord> p) {
    bool e = true;
    for (auto c : p) e = e && (c % 2 == 0);
    if (e) even.insert(p);
  });
  std::vector<GridFunction> f{even.indicator()};
  const LatticeVector x{0, 2, 0, -2, 0};
  CHECK(multilinear_average(f, s, RadiusClass{4}, x) == doctest::Approx(1.0 / 9).epsilon(1e-14));
  std::vector<LatticeSet> sets{even};
  std::vector<Rational> scales{Rational(1)};
  CHECK(multilinear_average_exact(sets, scales, s, RadiusClass{4}, x) == Rational(1, 9));
}

TEST_CASE("empty shell errors") {
  const auto s = SimplexSpec::orthonormal(5, 2);
  const Box box = Box::centered(5, 5);
  std::vector<GridFunction> f{constant(box, 1), constant(box, 1)};
  const auto s1 = SimplexSpec::orthonormal(1, 1);
  std::vector<GridFunction> g{constant(Box::centered(1, 9), 1)};
  CHECK_THROWS_AS(multilinear_average(g, s1, RadiusClass{2}, LatticeVector{0}), PreconditionError);
  auto mv = maximal_function(g, s1, 1, 4, LatticeVector{0});
  CHECK(mv.skipped == std::vector<std::int64_t>{2, 3});
  CHECK_THROWS_AS(maximal_function(g, s1, 2, 3, LatticeVector{0}), PreconditionError);
  CHECK_THROWS_AS(maximal_function(g, s1, 3, 2, LatticeVector{0}), PreconditionError);
  CHECK_THROWS_AS(multilinear_average(std::span(f).first(1), s, RadiusClass{1}, LatticeVector(5)), PreconditionError);
}

TEST_CASE("multilinearity and translation equivariance") {
  const auto s = SimplexSpec::parse("1,1,0,0,0;1,-1,0,0,0", 5);
  const Box box = Box::centered(5, 6);
  std::vector<GridFunction> f{random_function(box, 1), random_function(box, 2)};
  const LatticeVector x{1, 0, -1, 0, 1};
  const RadiusClass r{2};
  const double base = multilinear_average(f, s, r, x);
  CHECK(base != 0.0);

  auto g = f;
  for (auto& v : g[1].values()) v *= -2.5;
  CHECK(multilinear_average(g, s, r, x) == doctest::Approx(-2.5 * base).epsilon(1e-12));

  auto h = f;
  auto extra = random_function(box, 3);
  for (std::size_t i = 0; i < h[0].values().size(); ++i) h[0].values()[i] += extra.values()[i];
  std::vector<GridFunction> e{extra, f[1]};
  CHECK(multilinear_average(h, s, r, x) ==
        doctest::Approx(base + multilinear_average(e, s, r, x)).epsilon(1e-12));

  const std::vector<Coord> t{3, -7, 11, 0, 2};
  std::vector<GridFunction> ft{f[0].translated(t), f[1].translated(t)};
  LatticeVector xt = x;
  for (std::size_t c = 0; c < 5; ++c) xt[c] += t[c];
  CHECK(multilinear_average(ft, s, r, xt) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("exact mode equals pinned count") {
  const auto s = SimplexSpec::orthonormal(5, 2);
  const Box box = Box::centered(5, 7);
  const auto A = random_set(box, 0.6, 11);
  const auto B = random_set(box, 0.4, 12);
  const LatticeVector x{0, 1, 0, -1, 0};
  const RadiusClass r{2};
  EmbeddingTable table(s, r);
  CHECK(table.size() == count_embeddings(s, r));
  std::vector<const LatticeSet*> ptrs{&A, &B};
  const auto hits = table.pinned_count(ptrs, x);
  std::vector<LatticeSet> sets{A, B};
  std::vector<Rational> one{Rational(1), Rational(1)};
  CHECK(multilinear_average_exact(sets, one, s, r, x) == Rational(BigInt(hits), BigInt(table.size())));
  std::vector<Rational> sc{Rational(1, 3), Rational(-2)};
  CHECK(multilinear_average_exact(sets, sc, s, r, x) == Rational(BigInt(hits), BigInt(table.size())) * Rational(-2, 3));
  std::vector<GridFunction> ind{A.indicator(), B.indicator()};
  CHECK(multilinear_average(ind, s, r, x) ==
        doctest::Approx(static_cast<double>(hits) / static_cast<double>(table.size())).epsilon(1e-14));
  std::vector<const GridFunction*> fp{&ind[0], &ind[1]};
  CHECK(table.sum_products(fp, x) == static_cast<double>(hits));
  CHECK(table.pinned_count(A, x) == EmbeddingTable(s, r).pinned_count(std::vector<const LatticeSet*>{&A, &A}, x));
}

TEST_CASE("embedding table matches enumeration") {
  const auto s = SimplexSpec::parse("1,1,0,0,0;0,1,1,0,0", 5);
  for (std::int64_t n : {1, 2, 4}) {
    EmbeddingTable t(s, RadiusClass{n});
    const auto flat = t.tuples();
    EnumerationOptions o;
    o.list_cap = 1'000'000;
    const auto list = simplex_embeddings(s, RadiusClass{n}, EnumerationMode::list, o);
    CHECK(t.size() == list.count);
    REQUIRE(flat.size() == list.count * 2 * 5);
    Coord reach_seen = 0;
    for (std::size_t i = 0; i < list.count; ++i) {
      std::vector<LatticeVector> tup;
      for (std::size_t v = 0; v < 2; ++v) {
        LatticeVector y(5);
        for (std::size_t c = 0; c < 5; ++c) {
          y[c] = flat[(i * 2 + v) * 5 + c];
          reach_seen = std::max(reach_seen, std::abs(y[c]));
        }
        tup.push_back(y);
      }
      CHECK(is_isometric(tup, s, RadiusClass{n}));
    }
    CHECK(t.coordinate_reach() == reach_seen);
  }
}

TEST_CASE("maximal function monotone and dominates") {
  const auto s = SimplexSpec::orthonormal(5, 1);
  const Box box = Box::centered(5, 9);
  std::vector<GridFunction> f{random_function(box, 5)};
  const LatticeVector x{1, -1, 0, 2, 0};
  const auto m1 = maximal_function(f, s, 2, 4, x);
  const auto m2 = maximal_function(f, s, 1, 6, x);
  CHECK(m1.value <= m2.value);
  for (std::int64_t n = 1; n <= 6; ++n) CHECK(m2.value >= std::abs(multilinear_average(f, s, RadiusClass{n}, x)));
  const auto single = maximal_function(f, s, 3, 3, x);
  CHECK(single.value == doctest::Approx(std::abs(multilinear_average(f, s, RadiusClass{3}, x))).epsilon(1e-15));
  CHECK(single.argmax_lambda_sq == 3);
}

TEST_CASE("pinned profile full box") {
  const auto s = SimplexSpec::orthonormal(5, 2);
  const Box box = Box::centered(5, 9);
  LatticeSet A(box);
  for (std::size_t i = 0; i < box.volume(); ++i) A.set_index(i, true);
  const auto prof = pinned_profile(A, s, 1, 4);
  CHECK(prof.admissible_pins == 3125);  // margin 2 in a side-9 box
  for (const auto& p : prof.pins) CHECK(p.min_value == 1.0);
  CHECK(prof.best_value == 1.0);
  CHECK(prof.beats_threshold);
}

TEST_CASE("pinned profile counterexample") {
  // (Q_2 cap Z^5) + (40Z)^5: residues in [-2, 2] mod 40.
  const auto s = SimplexSpec::orthonormal(5, 1);
  const Box box = Box::cube(5, -12, 25);
  LatticeSet A(box);
  for (std::size_t i = 0; i < box.volume(); ++i) {
    const auto p = box.point(i);
    bool in = true;
    for (std::size_t c = 0; c < 5 && in; ++c) {
      Coord r = ((p[c] % 40) + 40) % 40;
      if (r > 20) r -= 40;
      in = std::abs(r) <= 2;
    }
    A.set_index(i, in);
  }
  const auto prof = pinned_profile(A, s, 100, 100);
  REQUIRE(prof.pins.size() > 0);
  for (const auto& p : prof.pins) CHECK(p.counts[0] == 0);
  CHECK(prof.best_value == 0.0);
}

TEST_CASE("pinned profile bernoulli") {
  const auto s = SimplexSpec::orthonormal(5, 1);
  const Box box = Box::cube(5, 0, 40);
  const auto A = random_set(box, 0.5, 20240);
  PinnedProfileOptions o;
  o.max_pins = 400;
  o.seed = 3;
  o.threads = 4;
  const auto prof = pinned_profile(A, s, 25, 25, o);
  CHECK(prof.sampled);
  CHECK(prof.pins.size() == 400);
  double mean = 0;
  for (const auto& p : prof.pins) mean += p.min_value;
  mean /= static_cast<double>(prof.pins.size());
  CHECK(std::abs(mean - 0.5) < 0.05);
  CHECK(std::abs(prof.density - 0.5) < 0.01);
}

TEST_CASE("pinned profile preconditions and sampling reproducibility") {
  const auto s = SimplexSpec::orthonormal(5, 1);
  const Box box = Box::centered(5, 5);
  LatticeSet A(box);
  CHECK_THROWS_AS(pinned_profile(A, s, 1, 1), PreconditionError);
  A.insert(LatticeVector{2, 2, 2, 2, 2}.coords());
  CHECK_THROWS_AS(pinned_profile(A, s, 1, 1), PreconditionError);
  const auto B = random_set(Box::centered(5, 11), 0.7, 9);
  PinnedProfileOptions o;
  o.max_pins = 50;
  o.seed = 77;
  const auto p1 = pinned_profile(B, s, 1, 3, o);
  o.threads = 3;
  const auto p2 = pinned_profile(B, s, 1, 3, o);
  REQUIRE(p1.pins.size() == p2.pins.size());
  for (std::size_t i = 0; i < p1.pins.size(); ++i) {
    CHECK(p1.pins[i].pin == p2.pins[i].pin);
    CHECK(p1.pins[i].counts == p2.pins[i].counts);
  }
  CHECK(p1.best_pin == p2.best_pin);
}

TEST_CASE("maximal field agrees with pointwise evaluation") {
  for (std::size_t k : {1, 2, 3}) {
    const auto s = SimplexSpec::orthonormal(5, k);
    const Box box = Box::cube(5, 0, 3);
    std::vector<GridFunction> fs;
    for (std::size_t i = 0; i < k; ++i) fs.push_back(random_function(box, 40 + i));
    const std::vector<std::int64_t> radii{1, 2};
    GridFunction field(box);
    const auto st = maximal_field(fs, s, radii, &field, 2);
    double sq = 0;
    std::size_t bad = 0, i = 0;
    for_each_point(field.box(), [&](std::span<const Coord> p) {
      const double v = field.values()[i];
      sq += v * v;
      ++i;
      const LatticeVector x(std::vector<Coord>(p.begin(), p.end()));
      if (std::abs(maximal_function(fs, s, 1, 2, x).value - v) > 1e-12) ++bad;
    });
    CHECK(bad == 0);
    CHECK(st.sum_squares == doctest::Approx(sq).epsilon(1e-12));
    CHECK(st.sites == field.box().volume());
  }
}

TEST_CASE("maximal field in one dimension") {
  const auto s = SimplexSpec::orthonormal(1, 1);
  const Box box = Box::cube(1, 0, 8);
  std::vector<GridFunction> fs{random_function(box, 8)};
  const std::vector<std::int64_t> radii{1, 4};
  GridFunction field(box);
  maximal_field(fs, s, radii, &field);
  for_each_point(field.box(), [&](std::span<const Coord> p) {
    const double ref = maximal_function(fs, s, 1, 4, LatticeVector{p[0]}).value;
    CHECK(field.at(p) == doctest::Approx(ref).epsilon(1e-14));
  });
}

TEST_CASE("scalar and simd kernels agree") {
  if (!simd::isa_supported(simd::Isa::avx2)) return;
  const auto& a = simd::kernels_for(simd::Isa::scalar);
  const auto& b = simd::kernels_for(simd::Isa::avx2);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t n : {0, 1, 3, 4, 7, 16, 33, 1000}) {
    std::vector<double> x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = u(rng), y[i] = u(rng), z[i] = u(rng);
    auto ra = z, rb = z;
    a.accumulate(ra.data(), x.data(), n);
    b.accumulate(rb.data(), x.data(), n);
    CHECK(ra == rb);
    a.accumulate_product(ra.data(), x.data(), y.data(), n);
    b.accumulate_product(rb.data(), x.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ra[i] - rb[i]) <= 1e-13);
    a.max_abs_scaled(ra.data(), y.data(), 0.37, n);
    b.max_abs_scaled(rb.data(), y.data(), 0.37, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ra[i] - rb[i]) <= 1e-13);
    CHECK(std::abs(a.sum_squares(x.data(), n) - b.sum_squares(x.data(), n)) <= 1e-13 * (1 + n));
    CHECK(std::abs(a.dot(x.data(), y.data(), n) - b.dot(x.data(), y.data(), n)) <= 1e-13 * (1 + n));
  }
  // whole-pipeline agreement
  const auto s = SimplexSpec::orthonormal(7, 2);
  const Box box = Box::cube(7, 0, 3);
  std::vector<GridFunction> fs{random_function(box, 1), random_function(box, 2)};
  const std::vector<std::int64_t> radii{1, 2};
  simd::force_isa(simd::Isa::scalar);
  const auto sa = maximal_field(fs, s, radii);
  simd::force_isa(simd::Isa::avx2);
  const auto sb = maximal_field(fs, s, radii);
  simd::force_isa(std::nullopt);
  CHECK(sa.sum_squares == doctest::Approx(sb.sum_squares).epsilon(1e-13));
}

TEST_CASE("operator norm probe") {
  const auto s = SimplexSpec::orthonormal(5, 1);
  ProbeOptions o;
  o.trials = 2;
  o.seed = 5;
  const auto r1 = operator_norm_probe(s, 8, 1, 2, o);
  const auto r2 = operator_norm_probe(s, 8, 1, 2, o);
  CHECK(r1.ratios == r2.ratios);
  CHECK(r1.max_ratio > 0);
  // sup of averages of a unit-l2 function, bounded by the trivial sum over radii
  CHECK(r1.max_ratio <= std::sqrt(2.0));
  o.threads = 3;
  CHECK(operator_norm_probe(s, 8, 1, 2, o).ratios[0] == doctest::Approx(r1.ratios[0]).epsilon(1e-12));
  CHECK_THROWS_AS(operator_norm_probe(s, 8, 1, 2, ProbeOptions{0}), PreconditionError);
}

TEST_CASE("projection removes constants") {
  const Box box = Box::cube(3, 0, 8);
  const auto p = FreqParams::j_l(1, 3);
  const auto g = project_out_omega(constant(box, 2.0), p);
  CHECK(g.sup_norm() < 1e-12);
  // projection is idempotent and orthogonal
  const auto f = random_function(box, 4);
  const auto pf = project_out_omega(f, p);
  const auto ppf = project_out_omega(pf, p);
  double diff = 0, dot = 0;
  for (std::size_t i = 0; i < box.volume(); ++i) {
    diff = std::max(diff, std::abs(pf.values()[i] - ppf.values()[i]));
    dot += pf.values()[i] * (f.values()[i] - pf.values()[i]);
  }
  CHECK(diff < 1e-12);
  CHECK(std::abs(dot) < 1e-10);
  CHECK(pf.l2_norm() < f.l2_norm());
}

TEST_CASE("scatter accumulation matches pointwise sums") {
  for (std::size_t k : {1, 2, 3}) {
    const auto s = SimplexSpec::orthonormal(5, k);
    const Box box = Box::cube(5, -1, 3);
    std::vector<GridFunction> fs;
    for (std::size_t i = 0; i < k; ++i) fs.push_back(random_function(box, 70 + i));
    fs[0].values()[5] = 0.0;
    std::vector<const GridFunction*> ptrs;
    for (const auto& f : fs) ptrs.push_back(&f);
    EmbeddingTable t(s, RadiusClass{2});
    const Box out = box.grown(t.coordinate_reach());
    std::vector<double> acc(out.volume(), 0.0);
    t.accumulate_products(ptrs, out, acc);
    std::size_t i = 0, bad = 0;
    for_each_point(out, [&](std::span<const Coord> p) {
      const LatticeVector x(std::vector<Coord>(p.begin(), p.end()));
      if (std::abs(acc[i++] - t.sum_products(ptrs, x)) > 1e-12) ++bad;
    });
    CHECK(bad == 0);
  }
}
