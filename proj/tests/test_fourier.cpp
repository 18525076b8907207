#include <cmath>
#include <random>

#include "doctest.h"
#include "simplexlab/error.hpp"
#include "simplexlab/fourier.hpp"
#include "simplexlab/sampling.hpp"

using namespace simplexlab;

namespace {

GridFunction random_function(const Box& box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  GridFunction f(box);
  for (auto& v : f.values()) v = u(rng);
  return f;
}

// Direct double sum over the box; reference for convolve.
double direct_conv(const GridFunction& f, const Kernel& k, std::span<const Coord> t) {
  double s = 0;
  std::vector<Coord> y(t.size());
  for_each_point(f.box(), [&](std::span<const Coord> x) {
    for (std::size_t c = 0; c < t.size(); ++c) y[c] = t[c] - x[c];
    s += f.at(x) * k.at(y);
  });
  return s;
}

}  // namespace

TEST_CASE("lcm and moduli") {
  CHECK(lcm_range(1) == 1);
  CHECK(lcm_range(4) == 12);
  CHECK(lcm_range(6) == 60);
  CHECK(lcm_range(16) == 720720);
  CHECK(q_eta(0.5) == 12);
  CHECK(q_eta(1.0) == 1);
  CHECK(q_eta(std::pow(2.0, -0.5)) == 2);
  CHECK(q_j(0) == 1);
  CHECK(q_j(2) == 12);
  CHECK(q_j(6) == lcm_range(64));
  CHECK_THROWS_AS(lcm_range(0), PreconditionError);
  CHECK_THROWS_AS(q_eta(0), PreconditionError);
}

TEST_CASE("freq params validation") {
  CHECK_NOTHROW(FreqParams::eta_L(0.5, 12));
  CHECK_THROWS_AS(FreqParams::eta_L(0.5, 11), PreconditionError);
  CHECK_THROWS_AS(FreqParams::eta_L(1.0, 12), PreconditionError);
  CHECK_NOTHROW(FreqParams::j_l(2, 4));
  CHECK_THROWS_AS(FreqParams::j_l(2, 3), PreconditionError);
  CHECK(FreqParams::j_l(2, 16).radius() == Rational(1, 16384));
  CHECK(FreqParams::eta_L(0.5, 30).radius() == Rational(1, 30));
}

TEST_CASE("omega membership") {
  const auto p = FreqParams::eta_L(0.5, 30);
  const std::vector<Rational> zero(3, Rational(0));
  CHECK(omega_contains(zero, p));
  const std::vector<Rational> grid{Rational(1, 12), Rational(0), Rational(0)};
  CHECK(omega_contains(grid, p));
  const std::vector<Rational> half{Rational(1, 24), Rational(0), Rational(0)};
  CHECK_FALSE(omega_contains(half, p));
  // boundary: distance exactly 1/L is inside; torus wraparound near 1
  CHECK(omega_contains_1d(Rational(1, 12) + Rational(1, 30), p));
  CHECK_FALSE(omega_contains_1d(Rational(1, 12) + Rational(1, 30) + Rational(1, 1000000), p));
  CHECK(omega_contains_1d(Rational(-1, 40), p));
  CHECK(omega_contains_1d(Rational(39, 40), p));
  CHECK(omega_contains_1d(Rational(7, 3), p));
  const std::vector<double> fz{0.0, 0.25, 1.0 / 12};
  CHECK(omega_contains(fz, p));
  const std::vector<double> fb{1.0 / 12 + 1.0 / 30};
  CHECK(omega_contains(fb, p));
}

TEST_CASE("omega variants agree") {
  // (j, l) against (eta = 2^{-j/2}, L = 2^{l-j})
  std::mt19937_64 rng(3);
  for (unsigned j : {1u, 2u}) {
    const unsigned l = 8;
    const auto b = FreqParams::j_l(j, l);
    const auto a = FreqParams::eta_L(std::pow(2.0, -0.5 * j), BigInt(1) << (l - j));
    CHECK(a.modulus() == b.modulus());
    for (int i = 0; i < 400; ++i) {
      const Rational xi(BigInt(rng() % 4096), BigInt(4096));
      CHECK(omega_contains_1d(xi, a) == omega_contains_1d(xi, b));
    }
  }
}

TEST_CASE("chi kernel") {
  auto k = chi_kernel(1, 4, 1);
  const auto g = k.materialize();
  CHECK(g.box().lower()[0] == -2);
  CHECK(g.box().extents()[0] == 4);
  for (double v : g.values()) CHECK(v == 0.25);
  const auto k2 = chi_kernel(2, 4, 1).materialize();
  CHECK(k2.at(std::vector<Coord>{-2}) == 0.5);
  CHECK(k2.at(std::vector<Coord>{0}) == 0.5);
  CHECK(k2.at(std::vector<Coord>{-1}) == 0.0);
  CHECK(k2.at(std::vector<Coord>{1}) == 0.0);
  CHECK(k2.sum() == 1.0);
  const auto k3 = chi_kernel(1, 2, 2).materialize();
  int nz = 0;
  for (double v : k3.values()) nz += v == 0.25;
  CHECK(nz == 4);
  for (std::uint64_t q : {1, 2, 3})
    for (std::uint64_t L : {3, 6, 9, 12})
      if (L % q == 0 && q <= L) {
        CHECK(chi_mass_exact(q, L, 3) == Rational(1));
        CHECK(chi_kernel(q, L, 2).materialize().sum() == doctest::Approx(1).epsilon(1e-14));
      }
  CHECK_THROWS_AS(chi_kernel(3, 4, 1), PreconditionError);
  CHECK_THROWS_AS(chi_kernel(5, 4, 1), PreconditionError);
}

TEST_CASE("chi hat near rationals") {
  // 1 - |chi^| in [0, C L dist], |1 - chi^| <= C L dist with C = pi
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::uint64_t q : {1, 2, 6}) {
    const std::uint64_t L = 12;
    for (int i = 0; i < 200; ++i) {
      const double ell = static_cast<double>(rng() % q);
      const double off = u(rng) * 4.0 / L;
      const double xi = ell / static_cast<double>(q) + off;
      const double dist = to_double(grid_distance(exact_rational(xi), BigInt(q)));
      const std::vector<double> x{xi};
      const double v = chi_hat(q, L, x);
      CHECK(1 - v >= -1e-12);
      CHECK(1 - v <= M_PI * L * dist + 1e-12);
    }
  }
  const std::vector<double> z{0.0, 0.0};
  CHECK(chi_hat(2, 8, z) == doctest::Approx(1));
}

TEST_CASE("convolve matches direct sum") {
  const Box fb = Box::cube(2, -3, 7);
  const auto f = random_function(fb, 1);
  const auto k = chi_kernel(2, 6, 2);
  const Box out = Box::cube(2, -6, 12);
  const auto g = convolve(f, k, out);
  for_each_point(out, [&](std::span<const Coord> t) { CHECK(g.at(t) == doctest::Approx(direct_conv(f, k, t)).epsilon(1e-12)); });
}

TEST_CASE("u1 norm examples") {
  const Box Q = Box::cube(2, 0, 32);
  const GridFunction c(Q, -0.75);
  const auto u = u1_norm(c, Q, 2, 8);
  CHECK(u.interior == 0.75);
  CHECK(u.literal <= 0.75 + 1e-15);
  CHECK(u.literal >= 0.75 * (1 - 2.0 * 8 / 32));
  CHECK(u.interior_sites == 26 * 26);
  const GridFunction c2(Q, 0.3);
  CHECK(std::abs(u1_norm(c2, Q, 3, 9).interior - 0.3) <= 1e-14);

  GridFunction alt(Q);
  for_each_point(Q, [&](std::span<const Coord> p) { alt.set(p, p[0] % 2 ? -1.0 : 1.0); });
  CHECK(u1_norm(alt, Q, 1, 4).interior < 1e-15);

  CHECK(u1_norm(GridFunction(Q), Q, 1, 4).literal == 0.0);
  const auto r = random_function(Q, 2);
  CHECK(u1_norm(r, Q, 2, 8).literal <= r.sup_norm() + 1e-12);
  CHECK_THROWS_AS(u1_norm(r, Q, 3, 8), PreconditionError);
  CHECK_THROWS_AS(u1_norm(r, Q, 1, 64), PreconditionError);
}

TEST_CASE("u1 norm outside support is ignored") {
  const Box Q = Box::cube(2, 0, 16);
  const auto f = random_function(Box::cube(2, -4, 24), 6);
  GridFunction fq(Q);
  for_each_point(Q, [&](std::span<const Coord> p) { fq.set(p, f.at(p)); });
  CHECK(u1_norm(f, Q, 2, 4).literal == u1_norm(fq, Q, 2, 4).literal);
}

TEST_CASE("u1 spatial and fourier routes agree") {
  const Box Q = Box::cube(2, 5, 20);
  for (std::uint64_t q : {1, 2, 4})
    for (std::uint64_t L : {4, 8}) {
      const auto f = random_function(Q, q * 10 + L);
      CHECK(std::abs(u1_norm(f, Q, q, L).literal - u1_norm_fourier(f, Q, q, L)) < 1e-12);
    }
  const Box Q3 = Box::cube(3, 0, 9);
  const auto g = random_function(Q3, 4);
  CHECK(std::abs(u1_norm(g, Q3, 3, 6).literal - u1_norm_fourier(g, Q3, 3, 6)) < 1e-12);
}

TEST_CASE("uniformity test") {
  const Box box = Box::cube(2, 0, 48);
  LatticeSet full(box);
  for (std::size_t i = 0; i < box.volume(); ++i) full.set_index(i, true);
  const auto r = uniformity_test(full, 0.5);
  CHECK(r.q == 12);
  CHECK(r.ratio == 1.0);
  CHECK(r.is_uniform);
  CHECK(r.residues == 144);

  LatticeSet lat(box);
  for_each_point(box, [&](std::span<const Coord> p) {
    if (p[0] % 12 == 0 && p[1] % 12 == 0) lat.insert(p);
  });
  const auto r2 = uniformity_test(lat, 0.5);
  CHECK(r2.ratio == doctest::Approx(144));
  CHECK_FALSE(r2.is_uniform);
  CHECK(r2.worst_residue == std::vector<Coord>{12, 12});

  CHECK_THROWS_AS(uniformity_test(LatticeSet(box), 0.5), PreconditionError);
  CHECK_THROWS_AS(uniformity_test(full, 0.2), PreconditionError);
}

TEST_CASE("uniformity of a bernoulli set") {
  const Box box = Box::cube(2, 0, 1200);
  std::mt19937_64 rng(12);
  std::bernoulli_distribution b(0.3);
  LatticeSet A(box);
  for (std::size_t i = 0; i < box.volume(); ++i) A.set_index(i, b(rng));
  const auto r = uniformity_test(A, 0.5);
  CHECK(r.is_uniform);
  CHECK(r.ratio < 1.0625);
}

TEST_CASE("von neumann probe") {
  const auto s = SimplexSpec::orthonormal(7, 2);
  const Box Q = Box::cube(7, 0, 2);
  std::vector<GridFunction> zero{GridFunction(Q), GridFunction(Q)};
  const auto z = von_neumann_probe(zero, Q, s, 1.0, 1);
  CHECK(z.lhs == 0.0);
  CHECK(z.lambda_sq_lo == 1);
  CHECK(z.lambda_sq_hi == 4);

  std::vector<GridFunction> c{GridFunction(Q, 0.5), GridFunction(Q, 0.5)};
  const auto rc = von_neumann_probe(c, Q, s, 1.0, 1);
  CHECK(rc.min_u1 == 0.5);
  CHECK(rc.lhs <= 0.25 + 1e-15);
  CHECK(rc.lhs > 0);
  std::vector<GridFunction> c2{GridFunction(Q, -1.0), GridFunction(Q, -1.0)};
  CHECK(von_neumann_probe(c2, Q, s, 1.0, 1).lhs == doctest::Approx(4 * rc.lhs).epsilon(1e-12));

  GridFunction osc(Q);
  for_each_point(Q, [&](std::span<const Coord> p) { osc.set(p, p[0] % 2 ? -1.0 : 1.0); });
  std::vector<GridFunction> o{osc, GridFunction(Q, 1.0)};
  const auto ro = von_neumann_probe(o, Q, s, 1.0, 1);
  CHECK(ro.lhs < von_neumann_probe(std::vector<GridFunction>{GridFunction(Q, 1.0), GridFunction(Q, 1.0)}, Q, s, 1.0, 1).lhs);

  CHECK_THROWS_AS(von_neumann_probe(zero, Q, s, 0.5, 1), PreconditionError);
  std::vector<GridFunction> big{GridFunction(Q, 2.0), GridFunction(Q, 0.0)};
  CHECK_THROWS_AS(von_neumann_probe(big, Q, s, 1.0, 1), PreconditionError);
}

TEST_CASE("psi profile and analytic transforms") {
  CHECK(psi_profile_1d(0.0) == 1.0);
  CHECK(psi_profile_1d(0.5) == 1.0);
  CHECK(psi_profile_1d(-0.75) == doctest::Approx(0.5));
  CHECK(psi_profile_1d(1.0) == 0.0);
  CHECK(psi_profile_1d(3.0) == 0.0);
  for (double t = 0; t < 1.2; t += 0.01) {
    CHECK(psi_profile_1d(t) >= (t <= 0.5 ? 1.0 : 0.0));
    CHECK(psi_profile_1d(t) <= (t <= 1.0 ? 1.0 : 0.0));
  }
  CHECK(J_l(4) == 0);
  CHECK(J_l(8) == 1);
  CHECK(J_l(16) == 2);
  CHECK(J_l(31) == 2);
  const std::vector<double> grid{1.0 / 12, 5.0 / 12};
  CHECK(Psi_hat(16, 2, grid) == doctest::Approx(1.0));
  const std::vector<double> off{1.0 / 24, 0.0};
  CHECK(Psi_hat(16, 2, off) == 0.0);
}

TEST_CASE("realized sampling kernel") {
  const auto k = psi_sampling(16, 2, 2);
  CHECK(k.tag == KernelTag::Psi);
  const auto& f = k.terms[0].factor;
  CHECK(f.values.size() == 786432);
  double mass = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if ((f.lower + static_cast<Coord>(i)) % 12 != 0) CHECK(f.values[i] == 0.0);
    mass += f.values[i];
  }
  CHECK(mass == doctest::Approx(1).epsilon(1e-12));
  const auto leak = frequency_leak(16, 2, 2);
  CHECK(leak.period == 786432);
  CHECK(leak.max_outside <= 1e-8);
  CHECK(leak.peak_error <= 1e-8);
  CHECK(leak.mass_error <= 1e-8);
  CHECK_THROWS_AS(psi_sampling(16, 3, 2), PreconditionError);
  CHECK_THROWS_AS(delta_psi(16, 2, 2), PreconditionError);
  CHECK(delta_psi(16, 1, 2).terms.size() == 2);
}

TEST_CASE("telescoping") {
  const Box box = Box::cube(2, 0, 64);
  const auto f = random_function(box, 9);
  const auto t = telescoping_decompose(f, 16);
  CHECK(t.parts.size() == 4);
  CHECK(t.parts.size() == t.J + 2);
  CHECK(t.reconstruction_error <= 1e-10);
  const auto z = telescoping_decompose(GridFunction(Box::cube(2, 0, 8)), 8);
  CHECK(z.parts.size() == 3);
  for (const auto& p : z.parts) CHECK(p.sup_norm() == 0.0);
  CHECK_THROWS_AS(telescoping_decompose(f, 7), PreconditionError);
}

TEST_CASE("orthogonality probe") {
  // Outside Omega_{1,l} for every l >= 3.
  const std::vector<std::vector<double>> far{{0.25, 0.25}};
  CHECK(orthogonality_probe(0, 64, far, 3).max_sum <= 1e-6);
  CHECK(orthogonality_probe(0, 64, far).max_sum <= 1e-6);
  // Both transforms peak on the coarse grid: Delta vanishes.
  const std::vector<std::vector<double>> coarse{{0.0, 0.0}, {0.5, 0.0}};
  const auto c = orthogonality_probe(1, 64, coarse);
  CHECK(c.l_min == 16);
  CHECK(c.terms == 49);
  CHECK(c.max_sum == 0.0);
  // On q_1^-1 Z but not on Z: |DeltaPsi^| = 1 for every l.
  const std::vector<std::vector<double>> fine{{0.5, 0.0}};
  CHECK(orthogonality_probe(0, 64, fine).max_sum == 57.0);
  CHECK(orthogonality_probe(3, 32, coarse).terms == 0);
  CHECK(orthogonality_samples(1, 2, 10, 4, 3).size() == 19);
  CHECK_THROWS_AS(orthogonality_probe(3, 64, coarse, 4), PreconditionError);
}

TEST_CASE("mesh csv") {
  const auto mesh = psi_hat_mesh(8, 1, 2, 4);
  CHECK(mesh.size() == 16);
  const auto csv = mesh_csv(mesh);
  CHECK(csv.rfind("xi_1,xi_2,magnitude\n", 0) == 0);
  CHECK(mesh[0].magnitude == doctest::Approx(1.0));
}
