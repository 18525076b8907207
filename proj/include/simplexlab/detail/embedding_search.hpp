#pragma once

// Pruned coordinate-descent search for tuples (y_1..y_k) with
// y_i . y_j = lambda^2 t_ij. Shared by counting, listing, pinned counts and
// the streamed averages. Not part of the installed interface.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "simplexlab/enumeration.hpp"
#include "simplexlab/error.hpp"
#include "simplexlab/lattice.hpp"
#include "simplexlab/parallel.hpp"

namespace simplexlab::detail {

class NodeBudget {
 public:
  explicit NodeBudget(std::uint64_t cap) : cap_(cap) {}
  void charge(std::uint64_t n) {
    const auto total = used_.fetch_add(n, std::memory_order_relaxed) + n;
    if (cap_ != 0 && total > cap_)
      throw ResourceLimitError("enumeration: node cap of " + std::to_string(cap_) + " exceeded");
  }
  std::uint64_t used() const { return used_.load(std::memory_order_relaxed); }

 private:
  std::uint64_t cap_;
  std::atomic<std::uint64_t> used_{0};
};

inline std::int64_t isqrt128(__int128 n) {
  auto r = static_cast<__int128>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<std::int64_t>(r);
}

inline __int128 floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline __int128 ceil_div(__int128 a, __int128 b) { return -floor_div(-a, b); }

/// Visitor contract:
///   bool enter(std::size_t vertex, const Coord* y)   false prunes the subtree
///   void leave(std::size_t vertex)                   after a true enter
///   void emit(const Coord* const* ys)               ys indexed by vertex
class EmbeddingSearch {
 public:
  static constexpr std::size_t kMaxK = 16;

  EmbeddingSearch(const GramMatrix& t, std::int64_t lambda_sq, std::size_t dim, NodeBudget& budget)
      : d_(dim), k_(t.size()), budget_(budget) {
    require(k_ >= 1 && k_ <= kMaxK, "enumeration: k must be in [1, 16]");
    require(lambda_sq >= 0, "enumeration: lambda^2 must be non-negative");
    order_.resize(k_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return t(a, a) > t(b, b); });
    target_.resize(k_ * k_);
    for (std::size_t a = 0; a < k_; ++a)
      for (std::size_t b = 0; b < k_; ++b) {
        std::int64_t v;
        if (__builtin_mul_overflow(lambda_sq, t(order_[a], order_[b]), &v))
          throw OverflowError("enumeration: lambda^2 t_ij overflows 64 bits");
        target_[a * k_ + b] = v;
      }
    y_.assign(k_ * d_, 0);
    pre_.assign(k_ * (d_ + 1), 0);
  }

  ~EmbeddingSearch() = default;

  std::size_t k() const { return k_; }
  std::size_t dim() const { return d_; }
  /// Vertex handled at search level L.
  std::size_t vertex_at(std::size_t level) const { return order_[level]; }

  /// Pushes locally counted nodes to the shared budget.
  void flush() {
    if (pending_) {
      const auto n = pending_;
      pending_ = 0;
      budget_.charge(n);
    }
  }

  template <class V>
  void run(V& vis) {
    std::array<std::int64_t, kMaxK> r{};
    descend(0, d_ - 1, target_[0], r, vis);
    flush();
  }

  /// Search with the first-level vector fixed to y0 (which must solve the
  /// first-level norm equation).
  template <class V>
  void run_from(const Coord* y0, V& vis) {
    std::copy(y0, y0 + d_, y_.begin());
    complete(0, vis);
    flush();
  }

  /// All first-level vectors, flattened, in search order.
  std::vector<Coord> first_level() {
    struct Collect {
      std::vector<Coord>* out;
      std::size_t d;
      bool enter(std::size_t, const Coord* y) {
        out->insert(out->end(), y, y + d);
        return false;
      }
      void leave(std::size_t) {}
      void emit(const Coord* const*) {}
    };
    std::vector<Coord> out;
    Collect c{&out, d_};
    run(c);
    return out;
  }

 private:
  template <class V>
  void complete(std::size_t L, V& vis) {
    const Coord* y = &y_[L * d_];
    std::int64_t* pre = &pre_[L * (d_ + 1)];
    pre[0] = 0;
    for (std::size_t c = 0; c < d_; ++c) pre[c + 1] = pre[c] + y[c] * y[c];
    const std::size_t vertex = order_[L];
    ptrs_[vertex] = y;
    if (!vis.enter(vertex, y)) return;
    if (L + 1 == k_) {
      vis.emit(ptrs_.data());
    } else {
      std::array<std::int64_t, kMaxK> r{};
      for (std::size_t j = 0; j <= L; ++j) r[j] = target_[j * k_ + (L + 1)];
      descend(L + 1, d_ - 1, target_[(L + 1) * k_ + (L + 1)], r, vis);
    }
    vis.leave(vertex);
  }

  // Assigns coordinate c of the level-L vector; coordinates 0..c are free,
  // R is the remaining squared norm and r[j] the remaining dot with level j.
  template <class V>
  void descend(std::size_t L, std::size_t c, std::int64_t R, const std::array<std::int64_t, kMaxK>& r, V& vis) {
    const std::int64_t s = isqrt128(R);
    if (c == 0 && s * s != R) return;
    __int128 lo = -s, hi = s;
    for (std::size_t j = 0; j < L; ++j) {
      const __int128 a = y_[j * d_ + c];
      const __int128 P = pre_[j * (d_ + 1) + c];
      const __int128 rj = r[j];
      if (P == 0) {
        if (a == 0) {
          if (rj != 0) return;
          continue;
        }
        if (rj % a != 0) return;
        const __int128 v = rj / a;
        lo = std::max(lo, v);
        hi = std::min(hi, v);
      } else {
        const __int128 den = a * a + P;
        const __int128 D = P * (static_cast<__int128>(R) * den - rj * rj);
        if (D < 0) return;
        const __int128 sq = isqrt128(D);
        lo = std::max(lo, ceil_div(a * rj - sq - 1, den));
        hi = std::min(hi, floor_div(a * rj + sq + 1, den));
      }
      if (lo > hi) return;
    }
    Coord* y = &y_[L * d_];
    auto visit = [&](std::int64_t v) {
      if (++pending_ >= 4096) flush();
      const std::int64_t R2 = R - v * v;
      y[c] = v;
      std::array<std::int64_t, kMaxK> r2;
      for (std::size_t j = 0; j < L; ++j) r2[j] = r[j] - y_[j * d_ + c] * v;
      if (c == 0) {
        if (R2 != 0) return;
        for (std::size_t j = 0; j < L; ++j)
          if (r2[j] != 0) return;
        complete(L, vis);
      } else {
        descend(L, c - 1, R2, r2, vis);
      }
    };
    if (c == 0) {
      if (-s >= lo && -s <= hi) visit(-s);
      if (s != 0 && s >= lo && s <= hi) visit(s);
    } else {
      for (__int128 v = lo; v <= hi; ++v) visit(static_cast<std::int64_t>(v));
    }
    y[c] = 0;
  }

  std::size_t d_, k_;
  NodeBudget& budget_;
  std::uint64_t pending_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::int64_t> target_;
  std::vector<Coord> y_;
  std::vector<std::int64_t> pre_;
  std::array<const Coord*, kMaxK> ptrs_{};
};

// Splits the first-level vectors into work items and runs one visitor per
// item. Returns visitors in processing order.
template <class Visitor, class Make>
std::vector<Visitor> run_partitioned(const GramMatrix& t, std::int64_t lambda_sq, std::size_t d,
                                     const EnumerationOptions& opt, NodeBudget& budget, Make make) {
  EmbeddingSearch root(t, lambda_sq, d, budget);
  const std::vector<Coord> first = root.first_level();
  const std::size_t nfirst = first.size() / d;
  const std::size_t chunk = std::max<std::size_t>(1, opt.chunk);
  const std::size_t items = (nfirst + chunk - 1) / chunk;

  std::vector<std::size_t> order(items);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (opt.partition_shuffle_seed) {
    std::mt19937_64 rng(*opt.partition_shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<Visitor> results;
  results.reserve(items);
  for (std::size_t i = 0; i < items; ++i) results.push_back(make());

  parallel_for(items, resolve_threads(opt.threads), [&](std::size_t i) {
    const std::size_t item = order[i];
    EmbeddingSearch s(t, lambda_sq, d, budget);
    const std::size_t end = std::min(nfirst, (item + 1) * chunk);
    for (std::size_t v = item * chunk; v < end; ++v) s.run_from(&first[v * d], results[i]);
  });
  return results;
}

}  // namespace simplexlab::detail
