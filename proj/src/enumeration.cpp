#include "simplexlab/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>

#include "simplexlab/detail/embedding_search.hpp"
#include "simplexlab/error.hpp"
#include "simplexlab/parallel.hpp"

namespace simplexlab {

namespace {

using detail::EmbeddingSearch;
using detail::NodeBudget;
using detail::run_partitioned;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("enumeration: count overflows 64 bits");
  return r;
}

struct CountVisitor {
  std::uint64_t count = 0;
  bool enter(std::size_t, const Coord*) { return true; }
  void leave(std::size_t) {}
  void emit(const Coord* const*) { count = checked_add(count, 1); }
};

struct ListVisitor {
  std::size_t d = 0, k = 0;
  std::uint64_t cap = 0;
  std::atomic<std::uint64_t>* total = nullptr;
  std::vector<std::vector<LatticeVector>> tuples;
  bool enter(std::size_t, const Coord*) { return true; }
  void leave(std::size_t) {}
  void emit(const Coord* const* ys) {
    if (total->fetch_add(1, std::memory_order_relaxed) + 1 > cap)
      throw ResourceLimitError("enumeration: list cap of " + std::to_string(cap) + " tuples exceeded");
    std::vector<LatticeVector> t;
    t.reserve(k);
    for (std::size_t i = 0; i < k; ++i) t.emplace_back(std::vector<Coord>(ys[i], ys[i] + d));
    tuples.push_back(std::move(t));
  }
};

struct MemberVisitor {
  const LatticeSet* A = nullptr;
  const Coord* x = nullptr;
  std::size_t d = 0;
  std::uint64_t count = 0;
  bool enter(std::size_t, const Coord* y) {
    const Box& b = A->box();
    std::size_t idx = 0;
    for (std::size_t c = 0; c < d; ++c) {
      const Coord off = x[c] + y[c] - b.lower()[c];
      if (off < 0 || static_cast<std::uint64_t>(off) >= b.extents()[c]) return false;
      idx += static_cast<std::size_t>(off) * b.strides()[c];
    }
    return A->test_index(idx);
  }
  void leave(std::size_t) {}
  void emit(const Coord* const*) { count = checked_add(count, 1); }
};

}  // namespace

SphereSet sphere_points(std::size_t dim, std::int64_t lambda_sq, std::uint64_t max_points) {
  require(dim >= 1, "sphere_points: dimension must be positive");
  require(lambda_sq >= 0, "sphere_points: lambda^2 must be non-negative");
  NodeBudget budget(0);
  EmbeddingSearch s(GramMatrix(1, {1}), lambda_sq, dim, budget);
  struct Collect {
    std::vector<LatticeVector>* out;
    std::size_t d;
    std::uint64_t cap;
    bool enter(std::size_t, const Coord*) { return true; }
    void leave(std::size_t) {}
    void emit(const Coord* const* ys) {
      if (cap != 0 && out->size() >= cap)
        throw ResourceLimitError("sphere_points: more than " + std::to_string(cap) + " points");
      out->emplace_back(std::vector<Coord>(ys[0], ys[0] + d));
    }
  };
  SphereSet out{dim, RadiusClass{lambda_sq}, {}};
  Collect c{&out.points, dim, max_points};
  s.run(c);
  std::sort(out.points.begin(), out.points.end());
  return out;
}

EmbeddingSet simplex_embeddings(const SimplexSpec& simplex, RadiusClass radius, EnumerationMode mode,
                                const EnumerationOptions& options) {
  require(is_nondegenerate(simplex), "simplex_embeddings: simplex is degenerate");
  require(radius.lambda_sq >= 1, "simplex_embeddings: lambda^2 must be >= 1");
  if (mode == EnumerationMode::list) require(options.list_cap > 0, "simplex_embeddings: list mode needs a cap");
  const std::size_t d = simplex.dim();
  NodeBudget budget(options.node_cap);
  EmbeddingSet out{simplex, radius, mode, {}, 0, 0};
  if (mode == EnumerationMode::count) {
    auto parts = run_partitioned<CountVisitor>(simplex.gram(), radius.lambda_sq, d, options, budget,
                                               [] { return CountVisitor{}; });
    for (const auto& p : parts) out.count = checked_add(out.count, p.count);
  } else {
    std::atomic<std::uint64_t> total{0};
    const std::size_t k = simplex.k();
    const std::uint64_t cap = options.list_cap;
    auto parts = run_partitioned<ListVisitor>(simplex.gram(), radius.lambda_sq, d, options, budget, [&] {
      ListVisitor v;
      v.d = d;
      v.k = k;
      v.cap = cap;
      v.total = &total;
      return v;
    });
    for (auto& p : parts)
      for (auto& t : p.tuples) out.tuples.push_back(std::move(t));
    out.count = out.tuples.size();
  }
  out.nodes_visited = budget.used();
  return out;
}

std::uint64_t count_embeddings(const SimplexSpec& simplex, RadiusClass radius, const EnumerationOptions& options) {
  return simplex_embeddings(simplex, radius, EnumerationMode::count, options).count;
}

std::uint64_t brute_force_embeddings(const SimplexSpec& simplex, RadiusClass radius, std::uint64_t work_cap) {
  require(radius.lambda_sq >= 1, "brute_force_embeddings: lambda^2 must be >= 1");
  const std::size_t d = simplex.dim(), k = simplex.k();
  const auto& t = simplex.gram();
  std::uint64_t work = 0;
  auto charge = [&](long double n) {
    if (static_cast<long double>(work) + n > static_cast<long double>(work_cap))
      throw ResourceLimitError("brute_force_embeddings: work cap exceeded");
    work += static_cast<std::uint64_t>(n);
  };

  std::vector<std::vector<LatticeVector>> shells(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t target = radius.lambda_sq * t(i, i);
    std::int64_t B = isqrt(target);
    if (B * B < target) ++B;
    charge(std::pow(static_cast<long double>(2 * B + 1), static_cast<long double>(d)));
    LatticeVector y(d);
    for (std::size_t c = 0; c < d; ++c) y[c] = -B;
    while (true) {
      if (y.norm_sq() == target) shells[i].push_back(y);
      std::size_t c = 0;
      while (c < d && y[c] == B) y[c++] = -B;
      if (c == d) break;
      ++y[c];
    }
  }

  long double product = 1;
  for (const auto& s : shells) product *= static_cast<long double>(s.size());
  charge(product);
  for (const auto& s : shells)
    if (s.empty()) return 0;

  std::vector<std::size_t> idx(k, 0);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = dot(shells[i][idx[i]], shells[j][idx[j]]) == radius.lambda_sq * t(i, j);
    if (ok) ++count;
    std::size_t i = 0;
    while (i < k && ++idx[i] == shells[i].size()) idx[i++] = 0;
    if (i == k) break;
  }
  return count;
}

ScalingFit count_scaling_fit(const SimplexSpec& simplex, std::span<const std::int64_t> lambda_sq_list,
                             const EnumerationOptions& options) {
  const auto d = static_cast<double>(simplex.dim()), k = static_cast<double>(simplex.k());
  require(simplex.dim() >= 2 * simplex.k() + 3, "count_scaling_fit: needs d >= 2k+3");
  ScalingFit fit;
  fit.predicted_exponent = d * k - k * (k + 1);
  std::vector<double> xs, ys;
  for (auto lsq : lambda_sq_list) {
    auto e = simplex_embeddings(simplex, RadiusClass{lsq}, EnumerationMode::count, options);
    fit.points.push_back({lsq, e.count});
    fit.nodes_visited += e.nodes_visited;
    if (e.count > 0) {
      xs.push_back(0.5 * std::log(static_cast<double>(lsq)));
      ys.push_back(std::log(static_cast<double>(e.count)));
    }
  }
  if (xs.size() < 3) throw PreconditionError("count_scaling_fit: fewer than 3 radii with non-zero count, no fit");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw PreconditionError("count_scaling_fit: radii are all equal, no fit");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.constant_min = INFINITY;
  fit.constant_max = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = std::exp(ys[i] - fit.predicted_exponent * xs[i]);
    fit.constant_min = std::min(fit.constant_min, c);
    fit.constant_max = std::max(fit.constant_max, c);
  }
  return fit;
}

Coord reach(const SimplexSpec& simplex, RadiusClass radius) {
  Coord m = 0;
  for (std::size_t i = 0; i < simplex.k(); ++i) {
    const std::int64_t target = radius.lambda_sq * simplex.gram()(i, i);
    Coord r = isqrt(target);
    if (r * r < target) ++r;
    m = std::max(m, r);
  }
  return m;
}

std::uint64_t pinned_count(const LatticeSet& A, const LatticeVector& x, const SimplexSpec& simplex,
                           RadiusClass radius, const EnumerationOptions& options) {
  require(x.dim() == simplex.dim() && A.dim() == simplex.dim(), "pinned_count: dimension mismatch");
  require(radius.lambda_sq >= 1, "pinned_count: lambda^2 must be >= 1");
  require(A.box().contains_with_margin(x.coords(), reach(simplex, radius)),
          "pinned_count: pin " + to_string(x) + " violates the margin");
  NodeBudget budget(options.node_cap);
  auto parts = run_partitioned<MemberVisitor>(simplex.gram(), radius.lambda_sq, simplex.dim(), options, budget, [&] {
    MemberVisitor v;
    v.A = &A;
    v.x = x.coords().data();
    v.d = simplex.dim();
    return v;
  });
  std::uint64_t total = 0;
  for (const auto& p : parts) total = checked_add(total, p.count);
  return total;
}

std::string format_tuple(std::span<const LatticeVector> tuple) {
  std::string out;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ';';
    out += to_string(tuple[i]);
  }
  return out;
}

}  // namespace simplexlab
