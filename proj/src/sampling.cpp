#include "simplexlab/sampling.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "simplexlab/detail/fftw_util.hpp"
#include "simplexlab/error.hpp"

namespace simplexlab {

namespace {

constexpr std::uint64_t kMaxPeriod = std::uint64_t{1} << 26;

// sum_ell h(L(delta + ell/q)) given the distance delta in [0, 1/(2q)] to the nearest grid point.
double periodized(double delta, double inv_q, double L) {
  double s = psi_profile_1d(L * delta);
  for (double n = 1;; ++n) {
    const double a = L * (n * inv_q - delta);
    if (a > 1) break;
    s += psi_profile_1d(a) + psi_profile_1d(L * (n * inv_q + delta));
  }
  return s;
}

double distance_to_grid(double xi, const BigInt& q) {
  return to_double(grid_distance(exact_rational(xi), q));
}

std::uint64_t q_small(unsigned j) {
  const BigInt q = q_j(j);
  if (q > BigInt(std::numeric_limits<std::uint64_t>::max() / 2)) throw ResourceLimitError("sampling: q_j exceeds 64 bits");
  return q.convert_to<std::uint64_t>();
}

void check_j(unsigned l, unsigned j) {
  require(l >= 4, "sampling: need l >= 4");
  require(j <= J_l(l), "sampling: need 0 <= j <= J_l");
}

}  // namespace

double psi_profile_1d(double t) {
  t = std::abs(t);
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  return 0.5 * (1 - std::cos(2 * M_PI * t));
}

double psi_profile(std::span<const double> xi) {
  double p = 1;
  for (double x : xi) p *= psi_profile_1d(x);
  return p;
}

unsigned J_l(unsigned l) {
  require(l >= 4, "J_l: need l >= 4");
  return static_cast<unsigned>(std::bit_width(l)) - 1 - 2;
}

std::uint64_t sampling_period(unsigned l) {
  require(l >= 4, "sampling_period: need l >= 4");
  if (l + 2 >= 26) throw ResourceLimitError("sampling_period: period exceeds 2^26");
  const std::uint64_t q = q_small(J_l(l));
  const std::uint64_t p = std::lcm(q, std::uint64_t{1} << (l + 2));
  if (p > kMaxPeriod) throw ResourceLimitError("sampling_period: period exceeds 2^26");
  return p;
}

double psi_hat(std::uint64_t q, std::uint64_t L, std::span<const double> xi) {
  require(q >= 1 && L >= 1, "psi_hat: need q, L >= 1");
  double p = 1;
  for (double x : xi) p *= periodized(distance_to_grid(x, BigInt(q)), 1.0 / static_cast<double>(q), static_cast<double>(L));
  return p;
}

double Psi_hat(unsigned l, unsigned j, std::span<const double> xi) {
  require(l >= j, "Psi_hat: need l >= j");
  const BigInt q = q_j(j);
  const double inv_q = 1.0 / to_double(Rational(q));
  const double L = std::ldexp(1.0, static_cast<int>(l - j));
  double p = 1;
  for (double x : xi) p *= periodized(distance_to_grid(x, q), inv_q, L);
  return p;
}

double DeltaPsi_hat(unsigned l, unsigned j, std::span<const double> xi) {
  return Psi_hat(l, j + 1, xi) - Psi_hat(l, j, xi);
}

Kernel psi_kernel(std::uint64_t q, std::uint64_t L, std::size_t d, std::uint64_t period) {
  require(d >= 1, "psi_kernel: dimension must be positive");
  require(q >= 1 && L > q, "psi_kernel: need L > q >= 1");
  require(period % q == 0 && period % (4 * L) == 0, "psi_kernel: period must be a multiple of q and 4L");
  if (period > kMaxPeriod) throw ResourceLimitError("psi_kernel: period exceeds 2^26");
  const std::size_t P = period, half = P / 2 + 1;
  detail::FftwBuffer<fftw_complex> spec(half);
  detail::FftwBuffer<double> out(P);
  const double inv_q = 1.0 / static_cast<double>(q);
  for (std::size_t m = 0; m < half; ++m) {
    const auto mq = static_cast<unsigned __int128>(m) * q % P;
    const auto r = static_cast<std::uint64_t>(std::min<unsigned __int128>(mq, P - mq));
    const double delta = static_cast<double>(r) / (static_cast<double>(P) * static_cast<double>(q));
    spec.data()[m][0] = periodized(delta, inv_q, static_cast<double>(L));
    spec.data()[m][1] = 0;
  }
  fftw_plan plan;
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(P), spec.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  KernelFactor f;
  f.lower = -static_cast<Coord>(P / 2);
  f.values.assign(P, 0.0);
  for (std::size_t i = 0; i < P; ++i) {
    const std::size_t x = (i + P / 2) % P;  // torus position of lower + i
    if (x % q == 0) f.values[i] = out.data()[x] / static_cast<double>(P);
  }
  Kernel k;
  k.tag = KernelTag::psi;
  k.dim = d;
  k.terms.push_back({1.0, std::move(f)});
  return k;
}

Kernel psi_sampling(unsigned l, unsigned j, std::size_t d) {
  check_j(l, j);
  Kernel k = psi_kernel(q_small(j), std::uint64_t{1} << (l - j), d, sampling_period(l));
  k.tag = KernelTag::Psi;
  return k;
}

Kernel delta_psi(unsigned l, unsigned j, std::size_t d) {
  check_j(l, j + 1);
  Kernel hi = psi_sampling(l, j + 1, d), lo = psi_sampling(l, j, d);
  Kernel k;
  k.tag = KernelTag::DeltaPsi;
  k.dim = d;
  k.terms.push_back({1.0, std::move(hi.terms[0].factor)});
  k.terms.push_back({-1.0, std::move(lo.terms[0].factor)});
  return k;
}

LeakReport frequency_leak(unsigned l, unsigned j, std::size_t d) {
  require(d >= 1, "frequency_leak: dimension must be positive");
  const Kernel k = psi_sampling(l, j, 1);
  const auto& f = k.terms[0].factor;
  const std::size_t P = f.values.size();
  const std::uint64_t q = q_small(j);
  LeakReport rep;
  rep.period = P;
  detail::FftwBuffer<double> in(P);
  detail::FftwBuffer<fftw_complex> spec(P / 2 + 1);
  double mass = 0;
  for (std::size_t i = 0; i < P; ++i) {
    const auto x = static_cast<std::size_t>((f.lower + static_cast<Coord>(i) + static_cast<Coord>(P)) % static_cast<Coord>(P));
    in.data()[x] = f.values[i];
    mass += f.values[i];
  }
  rep.mass_error = std::pow(std::abs(mass), static_cast<double>(d)) - 1;
  rep.mass_error = std::abs(rep.mass_error);
  fftw_plan plan;
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(P), in.data(), spec.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  double peak = 0;
  const auto scale = static_cast<unsigned __int128>(1) << (l - j);
  for (std::size_t m = 0; m <= P / 2; ++m) {
    const double mag = std::hypot(spec.data()[m][0], spec.data()[m][1]);
    peak = std::max(peak, mag);
    const auto mq = static_cast<unsigned __int128>(m) * q % P;
    const auto r = std::min<unsigned __int128>(mq, P - mq);
    if (r == 0) rep.peak_error = std::max(rep.peak_error, std::abs(mag - 1));
    // outside the 1D band: r / (P q) > 2^{j-l}
    if (r * scale > static_cast<unsigned __int128>(P) * q) rep.max_outside_1d = std::max(rep.max_outside_1d, mag);
  }
  rep.max_outside = rep.max_outside_1d * std::pow(peak, static_cast<double>(d - 1));
  return rep;
}

std::vector<MeshPoint> psi_hat_mesh(unsigned l, unsigned j, std::size_t d, std::size_t n) {
  require(d >= 1 && n >= 1, "psi_hat_mesh: need d, n >= 1");
  if (std::pow(static_cast<double>(n), static_cast<double>(d)) > 1e7) throw ResourceLimitError("psi_hat_mesh: mesh too large");
  std::vector<double> axis(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double xi = static_cast<double>(m) / static_cast<double>(n);
    axis[m] = Psi_hat(l, j, std::span(&xi, 1));
  }
  std::vector<MeshPoint> out;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    MeshPoint p;
    p.magnitude = 1;
    for (std::size_t c = 0; c < d; ++c) {
      p.xi.push_back(static_cast<double>(idx[c]) / static_cast<double>(n));
      p.magnitude *= axis[idx[c]];
    }
    p.magnitude = std::abs(p.magnitude);
    out.push_back(std::move(p));
    std::size_t c = d;
    while (c-- > 0) {
      if (++idx[c] < n) break;
      idx[c] = 0;
      if (c == 0) return out;
    }
  }
}

std::string mesh_csv(std::span<const MeshPoint> mesh) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t d = mesh.empty() ? 0 : mesh[0].xi.size();
  for (std::size_t c = 0; c < d; ++c) os << "xi_" << c + 1 << ',';
  os << "magnitude\n";
  for (const auto& p : mesh) {
    for (double x : p.xi) os << x << ',';
    os << p.magnitude << '\n';
  }
  return os.str();
}

Telescoping telescoping_decompose(const GridFunction& f, unsigned l) {
  require(l >= 8, "telescoping_decompose: need l >= 8");
  Telescoping t;
  t.l = l;
  t.J = J_l(l);
  const std::size_t d = f.dim();
  const Box& box = f.box();
  t.parts.push_back(convolve(f, psi_sampling(l, 0, d), box));
  for (unsigned j = 0; j < t.J; ++j) t.parts.push_back(convolve(f, delta_psi(l, j, d), box));
  GridFunction last = convolve(f, psi_sampling(l, t.J, d), box);
  for (std::size_t i = 0; i < box.volume(); ++i) last.values()[i] = f.values()[i] - last.values()[i];
  t.parts.push_back(std::move(last));
  double err = 0;
  for (std::size_t i = 0; i < box.volume(); ++i) {
    double s = 0;
    for (const auto& p : t.parts) s += p.values()[i];
    err = std::max(err, std::abs(s - f.values()[i]));
  }
  t.reconstruction_error = err / std::max(f.sup_norm(), 1e-300);
  if (f.sup_norm() == 0) t.reconstruction_error = err;
  return t;
}

OrthogonalityResult orthogonality_probe(unsigned j, unsigned l_max, std::span<const std::vector<double>> samples,
                                        unsigned l_min) {
  require(!samples.empty(), "orthogonality_probe: no samples");
  require(j < 28, "orthogonality_probe: j too large");
  if (l_min == 0) l_min = 1u << (j + 3);
  require(l_min >= (1u << j), "orthogonality_probe: need l_min >= 2^j");
  OrthogonalityResult r;
  r.j = j;
  r.l_max = l_max;
  r.l_min = l_min;
  r.terms = l_max >= l_min ? l_max - l_min + 1 : 0;
  const BigInt qa = q_j(j), qb = q_j(j + 1);
  const double inv_a = 1.0 / to_double(Rational(qa)), inv_b = 1.0 / to_double(Rational(qb));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& xi = samples[s];
    std::vector<double> da, db;
    for (double x : xi) {
      da.push_back(distance_to_grid(x, qa));
      db.push_back(distance_to_grid(x, qb));
    }
    double sum = 0;
    for (unsigned l = l_min; l <= l_max; ++l) {
      double pa = 1, pb = 1;
      for (std::size_t c = 0; c < xi.size(); ++c) {
        pa *= periodized(da[c], inv_a, std::ldexp(1.0, static_cast<int>(l - j)));
        pb *= periodized(db[c], inv_b, std::ldexp(1.0, static_cast<int>(l - j - 1)));
      }
      sum += (pb - pa) * (pb - pa);
    }
    r.sums.push_back(sum);
    if (sum > r.max_sum) {
      r.max_sum = sum;
      r.argmax = s;
    }
  }
  return r;
}

std::vector<std::vector<double>> orthogonality_samples(unsigned j, std::size_t d, std::size_t random_count,
                                                       std::uint64_t seed, std::size_t grid) {
  require(d >= 1, "orthogonality_samples: dimension must be positive");
  std::vector<std::vector<double>> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < random_count; ++i) {
    std::vector<double> xi(d);
    for (auto& x : xi) x = u(rng);
    out.push_back(std::move(xi));
  }
  const double q = to_double(Rational(q_j(j + 1)));
  std::vector<std::size_t> idx(d, 0);
  if (grid == 0) return out;
  while (true) {
    std::vector<double> xi(d);
    for (std::size_t c = 0; c < d; ++c) xi[c] = static_cast<double>(idx[c]) / q;
    out.push_back(std::move(xi));
    std::size_t c = d;
    while (c-- > 0) {
      if (++idx[c] < grid) break;
      idx[c] = 0;
      if (c == 0) return out;
    }
  }
}

}  // namespace simplexlab
