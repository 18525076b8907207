#include "simplexlab/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include "simplexlab/averaging.hpp"
#include "simplexlab/detail/fftw_util.hpp"
#include "simplexlab/error.hpp"

namespace simplexlab {

namespace {

BigInt floor_rational(const Rational& r) {
  const BigInt n = boost::multiprecision::numerator(r);
  const BigInt d = boost::multiprecision::denominator(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

std::uint64_t to_u64(const BigInt& v, const char* what) {
  require(v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max()), what);
  return v.convert_to<std::uint64_t>();
}

// Support of chi_{q,L} in one axis: first and last multiple of q in [-L/2, L/2).
std::pair<Coord, Coord> chi_range(std::uint64_t q, std::uint64_t L) {
  const auto Q = static_cast<Coord>(q), LL = static_cast<Coord>(L);
  // smallest n = q m with 2n >= -L
  Coord lo = -((LL / 2) / Q) * Q;
  while (2 * (lo - Q) >= -LL) lo -= Q;
  while (2 * lo < -LL) lo += Q;
  Coord hi = lo + (LL / Q - 1) * Q;
  return {lo, hi};
}

void check_chi(std::uint64_t q, std::uint64_t L) {
  require(q >= 1 && q <= L, "chi kernel: need 1 <= q <= L");
  require(L % q == 0, "chi kernel: need q | L");
}

// 5-smooth size >= n.
std::size_t fft_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace

// Exact value of a finite double.
Rational exact_rational(double x) {
  require(std::isfinite(x), "omega: non-finite frequency");
  if (x == 0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  Rational r = Rational(BigInt(mant));
  if (e >= 0) r *= Rational(BigInt(1) << e);
  else r /= Rational(BigInt(1) << -e);
  return r;
}

// Torus distance from xi to q^-1 Z.
Rational grid_distance(const Rational& xi, const BigInt& q) {
  const Rational t = xi * Rational(q);
  const BigInt n = floor_rational(t + Rational(1, 2));
  Rational dist = (t - Rational(n)) / Rational(q);
  if (dist < 0) dist = -dist;
  return dist;
}

BigInt lcm_range(std::uint64_t n) {
  require(n >= 1, "lcm_range: n must be >= 1");
  BigInt l = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    const BigInt bi(i);
    l = l / boost::multiprecision::gcd(l, bi) * bi;
  }
  return l;
}

BigInt q_eta(double eta) {
  require(eta > 0 && eta <= 1, "q_eta: eta must lie in (0, 1]");
  const long double inv = 1.0L / (static_cast<long double>(eta) * eta);
  const auto n = static_cast<std::uint64_t>(std::floor(inv * (1 + 1e-12L)));
  return lcm_range(std::max<std::uint64_t>(n, 1));
}

BigInt q_j(unsigned j) {
  require(j < 40, "q_j: j too large");
  return lcm_range(std::uint64_t{1} << j);
}

FreqParams FreqParams::eta_L(double eta, BigInt L) {
  FreqParams p;
  p.variant = Variant::eta_L;
  p.eta = eta;
  p.L = std::move(L);
  p.validate();
  return p;
}

FreqParams FreqParams::j_l(unsigned j, unsigned l) {
  FreqParams p;
  p.variant = Variant::j_l;
  p.j = j;
  p.l = l;
  p.validate();
  return p;
}

void FreqParams::validate() const {
  if (variant == Variant::eta_L) {
    require(eta > 0 && eta < 1, "freq params: eta must lie in (0, 1)");
    require(L >= q_eta(eta), "freq params: need L >= q_eta");
  } else {
    require(j < 40 && (std::uint64_t{1} << j) <= l, "freq params: need 2^j <= l");
  }
}

BigInt FreqParams::modulus() const { return variant == Variant::eta_L ? q_eta(eta) : q_j(j); }

Rational FreqParams::radius() const {
  if (variant == Variant::eta_L) return Rational(BigInt(1), L);
  return Rational(BigInt(1), BigInt(1) << (l - j));
}

std::string FreqParams::describe() const {
  if (variant == Variant::eta_L) return "eta=" + std::to_string(eta) + ",L=" + L.str();
  return "j=" + std::to_string(j) + ",l=" + std::to_string(l);
}

bool omega_contains_1d(const Rational& xi, const FreqParams& params) {
  return grid_distance(xi, params.modulus()) <= params.radius();
}

bool omega_contains(std::span<const Rational> xi, const FreqParams& params) {
  params.validate();
  const BigInt q = params.modulus();
  const Rational r = params.radius();
  for (const auto& x : xi)
    if (grid_distance(x, q) > r) return false;
  return true;
}

bool omega_contains(std::span<const double> xi, const FreqParams& params) {
  params.validate();
  const BigInt q = params.modulus();
  const Rational r = params.radius() + exact_rational(1e-12);
  for (double x : xi)
    if (grid_distance(exact_rational(x), q) > r) return false;
  return true;
}

GridFunction project_out_omega(const GridFunction& f, const FreqParams& params) {
  params.validate();
  const Box& box = f.box();
  const std::size_t d = box.dim();
  std::vector<int> n(d);
  for (std::size_t c = 0; c < d; ++c) n[c] = static_cast<int>(box.extents()[c]);
  const std::size_t last = box.extents()[d - 1] / 2 + 1;
  const std::size_t outer = box.volume() / box.extents()[d - 1];

  // 1D masks; Omega is a product set.
  std::vector<std::vector<char>> mask(d);
  for (std::size_t c = 0; c < d; ++c) {
    mask[c].resize(box.extents()[c]);
    for (std::size_t m = 0; m < box.extents()[c]; ++m)
      mask[c][m] = omega_contains_1d(Rational(BigInt(m), BigInt(box.extents()[c])), params);
  }

  detail::FftwBuffer<double> in(box.volume());
  detail::FftwBuffer<fftw_complex> spec(outer * last);
  std::copy(f.values().begin(), f.values().end(), in.data());
  fftw_plan fwd, inv;
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c(static_cast<int>(d), n.data(), in.data(), spec.data(), FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r(static_cast<int>(d), n.data(), spec.data(), in.data(), FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t o = 0; o < outer; ++o) {
    bool outer_in = true;
    for (std::size_t c = 0; c + 1 < d; ++c) outer_in = outer_in && mask[c][idx[c]];
    if (outer_in)
      for (std::size_t m = 0; m < last; ++m)
        if (mask[d - 1][m]) spec.data()[o * last + m][0] = spec.data()[o * last + m][1] = 0.0;
    for (std::size_t c = d - 1; c-- > 0;) {
      if (++idx[c] < box.extents()[c]) break;
      idx[c] = 0;
    }
  }
  fftw_execute(inv);
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  GridFunction out(box);
  const double scale = 1.0 / static_cast<double>(box.volume());
  for (std::size_t i = 0; i < box.volume(); ++i) out.values()[i] = in.data()[i] * scale;
  return out;
}

const char* kernel_tag_name(KernelTag tag) {
  switch (tag) {
    case KernelTag::none: return "none";
    case KernelTag::chi: return "chi";
    case KernelTag::psi: return "psi";
    case KernelTag::Psi: return "Psi";
    case KernelTag::DeltaPsi: return "DeltaPsi";
  }
  return "unknown";
}

double Kernel::at(std::span<const Coord> x) const {
  require(x.size() == dim, "kernel: dimension mismatch");
  double s = 0;
  for (const auto& t : terms) {
    double p = t.coef;
    for (auto c : x) {
      p *= t.factor.at(c);
      if (p == 0.0) break;
    }
    s += p;
  }
  return s;
}

Box Kernel::support_box() const {
  require(!terms.empty(), "kernel: no terms");
  Coord lo = terms[0].factor.lower, hi = lo + static_cast<Coord>(terms[0].factor.values.size());
  for (const auto& t : terms) {
    lo = std::min(lo, t.factor.lower);
    hi = std::max(hi, t.factor.lower + static_cast<Coord>(t.factor.values.size()));
  }
  return Box::cube(dim, lo, static_cast<std::uint64_t>(hi - lo));
}

GridFunction Kernel::materialize() const { return materialize(support_box()); }

GridFunction Kernel::materialize(const Box& window) const {
  require(window.dim() == dim, "kernel: window dimension mismatch");
  GridFunction g(window);
  std::size_t i = 0;
  for_each_point(window, [&](std::span<const Coord> p) { g.values()[i++] = at(p); });
  return g;
}

Kernel chi_kernel(std::uint64_t q, std::uint64_t L, std::size_t d) {
  check_chi(q, L);
  require(d >= 1, "chi kernel: dimension must be positive");
  const auto [lo, hi] = chi_range(q, L);
  KernelFactor f;
  f.lower = lo;
  f.values.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const double w = static_cast<double>(q) / static_cast<double>(L);
  for (Coord n = lo; n <= hi; n += static_cast<Coord>(q)) f.values[static_cast<std::size_t>(n - lo)] = w;
  Kernel k;
  k.tag = KernelTag::chi;
  k.dim = d;
  k.terms.push_back({1.0, std::move(f)});
  return k;
}

Rational chi_mass_exact(std::uint64_t q, std::uint64_t L, std::size_t d) {
  check_chi(q, L);
  const auto [lo, hi] = chi_range(q, L);
  const BigInt count_1d = BigInt((hi - lo) / static_cast<Coord>(q) + 1);
  Rational one_axis = Rational(count_1d) * Rational(BigInt(q), BigInt(L));
  Rational m = 1;
  for (std::size_t c = 0; c < d; ++c) m *= one_axis;
  return m;
}

double chi_hat(std::uint64_t q, std::uint64_t L, std::span<const double> xi) {
  check_chi(q, L);
  const auto [lo, hi] = chi_range(q, L);
  std::complex<double> prod = 1.0;
  for (double x : xi) {
    std::complex<double> s = 0;
    for (Coord n = lo; n <= hi; n += static_cast<Coord>(q)) s += std::polar(1.0, -2 * M_PI * static_cast<double>(n) * x);
    prod *= s * (static_cast<double>(q) / static_cast<double>(L));
  }
  // Half-open support makes chi^ complex; callers compare magnitudes.
  return std::abs(prod);
}

GridFunction convolve(const GridFunction& f, const Kernel& kernel, const Box& out) {
  const std::size_t d = f.dim();
  require(kernel.dim == d && out.dim() == d, "convolve: dimension mismatch");
  GridFunction result(out);
  for (const auto& term : kernel.terms) {
    // One axis at a time; after pass c the array spans out's range in axes <= c.
    std::vector<Coord> lo(f.box().lower().begin(), f.box().lower().end());
    std::vector<std::uint64_t> ext(f.box().extents().begin(), f.box().extents().end());
    std::vector<double> cur(f.values().begin(), f.values().end());
    const auto& kf = term.factor;
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<std::uint64_t> next_ext = ext;
      next_ext[c] = out.extents()[c];
      std::size_t inner = 1, outer = 1;
      for (std::size_t a = c + 1; a < d; ++a) inner *= ext[a];
      for (std::size_t a = 0; a < c; ++a) outer *= ext[a];
      const std::size_t n_in = ext[c], n_out = next_ext[c];
      std::vector<double> next(outer * n_out * inner, 0.0);
      // weights w[t][s] = K(out_lo + t - (lo + s)), skipping zero taps
      for (std::size_t t = 0; t < n_out; ++t) {
        const Coord tc = out.lower()[c] + static_cast<Coord>(t);
        for (std::size_t s = 0; s < n_in; ++s) {
          const double w = kf.at(tc - (lo[c] + static_cast<Coord>(s)));
          if (w == 0.0) continue;
          for (std::size_t o = 0; o < outer; ++o) {
            const double* src = &cur[(o * n_in + s) * inner];
            double* dst = &next[(o * n_out + t) * inner];
            for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
          }
        }
      }
      cur.swap(next);
      ext = next_ext;
      lo[c] = out.lower()[c];
    }
    auto rv = result.values();
    for (std::size_t i = 0; i < cur.size(); ++i) rv[i] += term.coef * cur[i];
  }
  return result;
}

U1Norm u1_norm(const GridFunction& f, const Box& Q, std::uint64_t q, std::uint64_t L) {
  check_chi(q, L);
  require(f.dim() == Q.dim(), "u1_norm: dimension mismatch");
  for (std::size_t c = 0; c < Q.dim(); ++c) require(L <= Q.extents()[c], "u1_norm: need L <= side(Q)");
  const std::size_t d = Q.dim();
  GridFunction fq(Q);
  std::size_t i = 0;
  for_each_point(Q, [&](std::span<const Coord> p) { fq.values()[i++] = f.at(p); });

  const auto [lo, hi] = chi_range(q, L);
  std::vector<Coord> olo(d);
  std::vector<std::uint64_t> oext(d);
  for (std::size_t c = 0; c < d; ++c) {
    olo[c] = Q.lower()[c] + lo;
    oext[c] = Q.extents()[c] + static_cast<std::uint64_t>(hi - lo);
  }
  const Box out(olo, oext);
  const GridFunction g = convolve(fq, chi_kernel(q, L, d), out);

  U1Norm r;
  double total = 0, inner = 0;
  std::uint64_t inner_sites = 0;
  std::size_t j = 0;
  for_each_point(out, [&](std::span<const Coord> t) {
    const double v = g.values()[j++];
    total += v * v;
    bool interior = true;
    for (std::size_t c = 0; c < d && interior; ++c)
      interior = t[c] - hi >= Q.lower()[c] && t[c] - lo < Q.upper(c);
    if (interior) {
      inner += v * v;
      ++inner_sites;
    }
  });
  r.literal = std::sqrt(total / static_cast<double>(Q.volume()));
  r.interior_sites = inner_sites;
  r.interior = inner_sites ? std::sqrt(inner / static_cast<double>(inner_sites)) : 0.0;
  return r;
}

double u1_norm_fourier(const GridFunction& f, const Box& Q, std::uint64_t q, std::uint64_t L) {
  check_chi(q, L);
  require(f.dim() == Q.dim(), "u1_norm: dimension mismatch");
  const std::size_t d = Q.dim();
  const auto [lo, hi] = chi_range(q, L);
  std::vector<int> n(d);
  std::size_t vol = 1;
  for (std::size_t c = 0; c < d; ++c) {
    n[c] = static_cast<int>(fft_size(Q.extents()[c] + static_cast<std::size_t>(hi - lo)));
    vol *= static_cast<std::size_t>(n[c]);
  }
  const std::size_t last = static_cast<std::size_t>(n[d - 1]) / 2 + 1;
  const std::size_t outer = vol / static_cast<std::size_t>(n[d - 1]);
  detail::FftwBuffer<double> in(vol);
  detail::FftwBuffer<fftw_complex> spec(outer * last);
  std::fill(in.data(), in.data() + vol, 0.0);
  // f restricted to Q, placed at the origin of the padded grid
  for_each_point(Q, [&](std::span<const Coord> p) {
    std::size_t idx = 0;
    for (std::size_t c = 0; c < d; ++c) idx = idx * static_cast<std::size_t>(n[c]) + static_cast<std::size_t>(p[c] - Q.lower()[c]);
    in.data()[idx] = f.at(p);
  });
  fftw_plan plan;
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c(static_cast<int>(d), n.data(), in.data(), spec.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  // |chi^| per axis: (q/L) |sin(pi L xi) / sin(pi q xi)|
  std::vector<std::vector<double>> amp(d);
  for (std::size_t c = 0; c < d; ++c) {
    amp[c].resize(static_cast<std::size_t>(n[c]));
    for (int m = 0; m < n[c]; ++m) {
      const double xi = static_cast<double>(m) / n[c];
      const double den = std::sin(M_PI * static_cast<double>(q) * xi);
      double a;
      if (std::abs(den) < 1e-300 || (static_cast<std::uint64_t>(m) * q) % static_cast<std::uint64_t>(n[c]) == 0)
        a = 1.0;
      else
        a = static_cast<double>(q) / static_cast<double>(L) * std::abs(std::sin(M_PI * static_cast<double>(L) * xi) / den);
      amp[c][static_cast<std::size_t>(m)] = a * a;
    }
  }
  std::vector<std::size_t> idx(d, 0);
  double total = 0;
  for (std::size_t o = 0; o < outer; ++o) {
    double w_outer = 1;
    for (std::size_t c = 0; c + 1 < d; ++c) w_outer *= amp[c][idx[c]];
    for (std::size_t m = 0; m < last; ++m) {
      const auto& z = spec.data()[o * last + m];
      const double mult = (m == 0 || (n[d - 1] % 2 == 0 && m == last - 1)) ? 1.0 : 2.0;
      total += mult * w_outer * amp[d - 1][m] * (z[0] * z[0] + z[1] * z[1]);
    }
    for (std::size_t c = d - 1; c-- > 0;) {
      if (++idx[c] < static_cast<std::size_t>(n[c])) break;
      idx[c] = 0;
    }
  }
  total /= static_cast<double>(vol);
  return std::sqrt(total / static_cast<double>(Q.volume()));
}

UniformityReport uniformity_test(const LatticeSet& A, double eta) {
  require(eta > 0 && eta <= 1, "uniformity_test: eta must lie in (0, 1]");
  const std::uint64_t q = to_u64(q_eta(eta), "uniformity_test: q_eta does not fit 64 bits");
  const Box& box = A.box();
  const std::size_t d = box.dim();
  for (std::size_t c = 0; c < d; ++c) require(box.extents()[c] >= q, "uniformity_test: box side smaller than q_eta");
  long double classes = std::pow(static_cast<long double>(q), static_cast<long double>(d));
  if (classes > 5e7L) throw ResourceLimitError("uniformity_test: too many residue classes");
  const std::size_t ncls = static_cast<std::size_t>(classes);

  UniformityReport rep;
  rep.q = q;
  rep.threshold = 1 + std::pow(eta, 4);
  rep.density = A.box_density();
  if (rep.density == 0) throw PreconditionError("uniformity_test: A has zero density on its box");

  std::vector<std::uint64_t> in_a(ncls, 0), in_box(ncls, 0);
  std::vector<std::uint64_t> res(d);
  // residues of the box lower corner, advanced like an odometer
  for (std::size_t c = 0; c < d; ++c) {
    const Coord m = box.lower()[c] % static_cast<Coord>(q);
    res[c] = static_cast<std::uint64_t>(m < 0 ? m + static_cast<Coord>(q) : m);
  }
  std::vector<std::uint64_t> start = res;
  std::vector<std::uint64_t> pos(d, 0);
  for (std::size_t i = 0; i < box.volume(); ++i) {
    std::size_t cls = 0;
    for (std::size_t c = 0; c < d; ++c) cls = cls * q + res[c];
    ++in_box[cls];
    in_a[cls] += A.test_index(i);
    for (std::size_t c = d; c-- > 0;) {
      if (++pos[c] < box.extents()[c]) {
        if (++res[c] == q) res[c] = 0;
        break;
      }
      pos[c] = 0;
      res[c] = start[c];
    }
  }
  rep.ratio = -1;
  for (std::size_t cls = 0; cls < ncls; ++cls) {
    if (in_box[cls] == 0) continue;
    ++rep.residues;
    const double r = (static_cast<double>(in_a[cls]) / static_cast<double>(in_box[cls])) / rep.density;
    if (r > rep.ratio) {
      rep.ratio = r;
      rep.worst_residue.assign(d, 0);
      std::size_t rem = cls;
      for (std::size_t c = d; c-- > 0;) {
        const auto s = rem % q;
        rem /= q;
        rep.worst_residue[c] = static_cast<Coord>(s == 0 ? q : s);
      }
    }
  }
  rep.is_uniform = rep.ratio <= rep.threshold;
  return rep;
}

VonNeumannResult von_neumann_probe(std::span<const GridFunction> fs, const Box& Q, const SimplexSpec& simplex,
                                   double eta, std::uint64_t L, const VonNeumannOptions& options) {
  require(eta > 0 && eta <= 1, "von_neumann_probe: eta must lie in (0, 1]");
  require(fs.size() == simplex.k(), "von_neumann_probe: need exactly k input functions");
  require(Q.dim() == simplex.dim(), "von_neumann_probe: dimension mismatch");
  const std::size_t d = Q.dim();
  std::uint64_t N = Q.extents()[0];
  for (std::size_t c = 0; c < d; ++c) N = std::min<std::uint64_t>(N, Q.extents()[c]);
  const long double e = eta;
  require(static_cast<long double>(N) * (1 + 1e-12L) >= static_cast<long double>(L) / std::pow(e, 6),
          "von_neumann_probe: need side(Q) >= eta^-6 L");
  const std::uint64_t q = to_u64(q_eta(eta), "von_neumann_probe: q_eta does not fit 64 bits");
  require(L % q == 0, "von_neumann_probe: need q_eta | L");

  // Restrict inputs to Q and check the value range.
  std::vector<GridFunction> fq;
  for (const auto& f : fs) {
    GridFunction g(Q);
    std::size_t i = 0;
    for_each_point(Q, [&](std::span<const Coord> p) {
      const double v = f.at(p);
      require(v >= -1 && v <= 1, "von_neumann_probe: input values must lie in [-1, 1]");
      g.values()[i++] = v;
    });
    fq.push_back(std::move(g));
  }

  VonNeumannResult r;
  r.q = q;
  const long double lam_lo = static_cast<long double>(L) / std::pow(e, 3);
  const long double lam_hi = std::pow(e, 3) * static_cast<long double>(N);
  r.lambda_sq_lo = static_cast<std::int64_t>(std::ceil(lam_lo * lam_lo * (1 - 1e-12L)));
  r.lambda_sq_hi = static_cast<std::int64_t>(std::floor(lam_hi * lam_hi * (1 + 1e-12L)));
  r.lambda_sq_lo = std::max<std::int64_t>(r.lambda_sq_lo, 1);
  require(r.lambda_sq_lo <= r.lambda_sq_hi, "von_neumann_probe: empty lambda window");

  std::vector<EmbeddingTable> tables;
  Coord reach_max = 0;
  for (auto n = r.lambda_sq_lo; n <= r.lambda_sq_hi; ++n) {
    EmbeddingTable t(simplex, RadiusClass{n}, options.enumeration);
    if (t.size() == 0) {
      r.skipped.push_back(n);
      continue;
    }
    reach_max = std::max(reach_max, t.coordinate_reach());
    tables.push_back(std::move(t));
  }
  require(!tables.empty(), "von_neumann_probe: every shell in the window is empty");

  std::vector<const GridFunction*> ptrs;
  for (const auto& g : fq) ptrs.push_back(&g);
  const Box out = Q.grown(reach_max);
  std::vector<double> best(out.volume(), 0.0), acc(out.volume());
  for (const auto& t : tables) {
    std::fill(acc.begin(), acc.end(), 0.0);
    t.accumulate_products(ptrs, out, acc);
    const double inv = 1.0 / static_cast<double>(t.size());
    for (std::size_t i = 0; i < acc.size(); ++i) best[i] = std::max(best[i], std::abs(acc[i] * inv));
  }
  double total = 0;
  for (double b : best) total += b;
  r.lhs = total / static_cast<double>(Q.volume());
  r.min_u1 = INFINITY;
  for (const auto& g : fq) {
    const auto u = u1_norm(g, Q, q, L);
    r.u1_interior.push_back(u.interior);
    r.u1_literal.push_back(u.literal);
    r.min_u1 = std::min(r.min_u1, u.interior);
  }
  r.measured_constant = (r.lhs - r.min_u1) / eta;
  return r;
}

}  // namespace simplexlab
