#include "simplexlab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "simplexlab/detail/embedding_search.hpp"
#include "simplexlab/error.hpp"
#include "simplexlab/fourier.hpp"
#include "simplexlab/parallel.hpp"
#include "simplexlab/simd/kernels.hpp"

namespace simplexlab {

namespace {

using detail::EmbeddingSearch;
using detail::NodeBudget;
using detail::run_partitioned;
constexpr std::size_t kMaxK = EmbeddingSearch::kMaxK;

void check_inputs(std::size_t n, const SimplexSpec& simplex, const LatticeVector& x) {
  require(n == simplex.k(), "average: need exactly k input functions");
  require(x.dim() == simplex.dim(), "average: base point dimension mismatch");
}

// Running products along the current prefix; zero factors prune.
struct ProductVisitor {
  const GridFunction* const* fs = nullptr;
  const Coord* x = nullptr;
  std::size_t d = 0;
  std::vector<Coord> pt;
  std::array<double, kMaxK + 1> stack{};
  std::size_t depth = 0;
  double sum = 0;

  bool enter(std::size_t vertex, const Coord* y) {
    for (std::size_t c = 0; c < d; ++c) pt[c] = x[c] + y[c];
    const double v = fs[vertex]->at(pt);
    if (v == 0.0) return false;
    stack[depth + 1] = stack[depth] * v;
    ++depth;
    return true;
  }
  void leave(std::size_t) { --depth; }
  void emit(const Coord* const*) { sum += stack[depth]; }
};

struct MultiMemberVisitor {
  const LatticeSet* const* sets = nullptr;
  const Coord* x = nullptr;
  std::size_t d = 0;
  std::vector<Coord> pt;
  std::uint64_t count = 0;

  bool enter(std::size_t vertex, const Coord* y) {
    for (std::size_t c = 0; c < d; ++c) pt[c] = x[c] + y[c];
    return sets[vertex]->contains(pt);
  }
  void leave(std::size_t) {}
  void emit(const Coord* const*) { ++count; }
};

double stream_sum(std::span<const GridFunction> fs, const SimplexSpec& simplex, RadiusClass radius,
                  const LatticeVector& x, const EnumerationOptions& options) {
  std::vector<const GridFunction*> ptrs;
  for (const auto& f : fs) {
    require(f.dim() == simplex.dim(), "average: input dimension mismatch");
    ptrs.push_back(&f);
  }
  NodeBudget budget(options.node_cap);
  auto parts = run_partitioned<ProductVisitor>(simplex.gram(), radius.lambda_sq, simplex.dim(), options, budget, [&] {
    ProductVisitor v;
    v.fs = ptrs.data();
    v.x = x.coords().data();
    v.d = simplex.dim();
    v.pt.assign(v.d, 0);
    v.stack[0] = 1.0;
    return v;
  });
  double sum = 0;
  for (const auto& p : parts) sum += p.sum;
  return sum;
}

// Exact a/b < c/d for non-negative counts.
bool ratio_less(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return static_cast<unsigned __int128>(a) * d < static_cast<unsigned __int128>(c) * b;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

double multilinear_average(std::span<const GridFunction> fs, const SimplexSpec& simplex, RadiusClass radius,
                           const LatticeVector& x, const EnumerationOptions& options) {
  check_inputs(fs.size(), simplex, x);
  const auto count = count_embeddings(simplex, radius, options);
  if (count == 0)
    throw PreconditionError("average: empty shell at lambda^2 = " + std::to_string(radius.lambda_sq));
  return stream_sum(fs, simplex, radius, x, options) / static_cast<double>(count);
}

Rational multilinear_average_exact(std::span<const LatticeSet> sets, std::span<const Rational> scales,
                                   const SimplexSpec& simplex, RadiusClass radius, const LatticeVector& x,
                                   const EnumerationOptions& options) {
  check_inputs(sets.size(), simplex, x);
  require(scales.size() == sets.size(), "average: one scale per input set");
  const auto count = count_embeddings(simplex, radius, options);
  if (count == 0)
    throw PreconditionError("average: empty shell at lambda^2 = " + std::to_string(radius.lambda_sq));
  std::vector<const LatticeSet*> ptrs;
  for (const auto& s : sets) {
    require(s.dim() == simplex.dim(), "average: input dimension mismatch");
    ptrs.push_back(&s);
  }
  NodeBudget budget(options.node_cap);
  auto parts =
      run_partitioned<MultiMemberVisitor>(simplex.gram(), radius.lambda_sq, simplex.dim(), options, budget, [&] {
        MultiMemberVisitor v;
        v.sets = ptrs.data();
        v.x = x.coords().data();
        v.d = simplex.dim();
        v.pt.assign(v.d, 0);
        return v;
      });
  BigInt hits = 0;
  for (const auto& p : parts) hits += p.count;
  Rational out(hits, BigInt(count));
  for (const auto& c : scales) out *= c;
  return out;
}

MaximalValue maximal_function(std::span<const GridFunction> fs, const SimplexSpec& simplex, std::int64_t lambda_sq_lo,
                              std::int64_t lambda_sq_hi, const LatticeVector& x, const EnumerationOptions& options) {
  check_inputs(fs.size(), simplex, x);
  require(lambda_sq_lo >= 1 && lambda_sq_lo <= lambda_sq_hi, "maximal_function: empty lambda^2 range");
  MaximalValue out;
  bool any = false;
  for (std::int64_t n = lambda_sq_lo; n <= lambda_sq_hi; ++n) {
    const auto count = count_embeddings(simplex, RadiusClass{n}, options);
    if (count == 0) {
      out.skipped.push_back(n);
      continue;
    }
    const double v = std::abs(stream_sum(fs, simplex, RadiusClass{n}, x, options) / static_cast<double>(count));
    if (!any || v > out.value) {
      out.value = v;
      out.argmax_lambda_sq = n;
    }
    any = true;
  }
  if (!any) throw PreconditionError("maximal_function: every shell in the range is empty");
  return out;
}

EmbeddingTable::EmbeddingTable(const SimplexSpec& simplex, RadiusClass radius, const EnumerationOptions& options)
    : d_(simplex.dim()), k_(simplex.k()), radius_(radius) {
  require(is_nondegenerate(simplex), "embedding table: simplex is degenerate");
  require(radius.lambda_sq >= 1, "embedding table: lambda^2 must be >= 1");
  struct Build {
    EmbeddingTable* t;
    std::vector<std::uint32_t> open;
    bool enter(std::size_t vertex, const Coord* y) {
      if (t->vertex_.size() >= UINT32_MAX - 1) throw ResourceLimitError("embedding table: too many nodes");
      open.push_back(static_cast<std::uint32_t>(t->vertex_.size()));
      t->vertex_.push_back(static_cast<std::uint32_t>(vertex));
      t->level_.push_back(static_cast<std::uint32_t>(open.size() - 1));
      t->end_.push_back(0);
      t->coords_.insert(t->coords_.end(), y, y + t->d_);
      return true;
    }
    void leave(std::size_t) {
      const auto idx = open.back();
      open.pop_back();
      const auto size = static_cast<std::uint32_t>(t->vertex_.size());
      if (t->level_[idx] + 1 < t->k_ && size == idx + 1) {
        // prefix without any completion
        t->vertex_.pop_back();
        t->level_.pop_back();
        t->end_.pop_back();
        t->coords_.resize(t->coords_.size() - t->d_);
        return;
      }
      t->end_[idx] = size;
    }
    void emit(const Coord* const*) {
      if (options_cap != 0 && t->leaves_ >= options_cap)
        throw ResourceLimitError("embedding table: more than " + std::to_string(options_cap) + " tuples");
      ++t->leaves_;
    }
    std::uint64_t options_cap = 0;
  };
  NodeBudget budget(options.node_cap);
  EmbeddingSearch s(simplex.gram(), radius.lambda_sq, d_, budget);
  Build b{this, {}, options.list_cap};
  s.run(b);
  for (auto c : coords_) coord_reach_ = std::max(coord_reach_, c < 0 ? -c : c);
}

std::uint64_t EmbeddingTable::pinned_count(const LatticeSet& A, const LatticeVector& x) const {
  std::vector<const LatticeSet*> sets(k_, &A);
  return pinned_count(sets, x);
}

std::uint64_t EmbeddingTable::pinned_count(std::span<const LatticeSet* const> sets, const LatticeVector& x) const {
  require(sets.size() == k_ && x.dim() == d_, "embedding table: input shape mismatch");
  std::vector<Coord> pt(d_);
  std::uint64_t count = 0;
  const std::size_t n = vertex_.size();
  for (std::size_t i = 0; i < n;) {
    const Coord* y = &coords_[i * d_];
    for (std::size_t c = 0; c < d_; ++c) pt[c] = x[c] + y[c];
    if (!sets[vertex_[i]]->contains(pt)) {
      i = end_[i];
      continue;
    }
    if (level_[i] + 1 == k_) ++count;
    ++i;
  }
  return count;
}

double EmbeddingTable::sum_products(std::span<const GridFunction* const> fs, const LatticeVector& x) const {
  require(fs.size() == k_ && x.dim() == d_, "embedding table: input shape mismatch");
  std::vector<Coord> pt(d_);
  std::array<double, kMaxK + 1> prod{};
  prod[0] = 1.0;
  double sum = 0;
  const std::size_t n = vertex_.size();
  for (std::size_t i = 0; i < n;) {
    const Coord* y = &coords_[i * d_];
    for (std::size_t c = 0; c < d_; ++c) pt[c] = x[c] + y[c];
    const double v = fs[vertex_[i]]->at(pt);
    if (v == 0.0) {
      i = end_[i];
      continue;
    }
    const auto L = level_[i];
    prod[L + 1] = prod[L] * v;
    if (L + 1 == k_) sum += prod[L + 1];
    ++i;
  }
  return sum;
}

void EmbeddingTable::accumulate_products(std::span<const GridFunction* const> fs, const Box& out,
                                         std::span<double> acc) const {
  require(fs.size() == k_ && out.dim() == d_, "embedding table: input shape mismatch");
  require(acc.size() == out.volume(), "embedding table: accumulator size mismatch");
  std::vector<Coord> x(d_), pt(d_);
  std::array<double, kMaxK + 1> prod{};
  for (std::size_t r = 0; r < vertex_.size(); r = end_[r]) {
    const GridFunction& f0 = *fs[vertex_[r]];
    const Coord* y0 = &coords_[r * d_];
    const auto vals = f0.values();
    for (std::size_t p = 0; p < vals.size(); ++p) {
      if (vals[p] == 0.0) continue;
      const LatticeVector base = f0.box().point(p);
      for (std::size_t c = 0; c < d_; ++c) x[c] = base[c] - y0[c];
      if (!out.contains(x)) continue;
      prod[1] = vals[p];
      double sum = k_ == 1 ? vals[p] : 0.0;
      for (std::size_t i = r + 1; i < end_[r];) {
        const Coord* y = &coords_[i * d_];
        for (std::size_t c = 0; c < d_; ++c) pt[c] = x[c] + y[c];
        const double v = fs[vertex_[i]]->at(pt);
        if (v == 0.0) {
          i = end_[i];
          continue;
        }
        const auto L = level_[i];
        prod[L + 1] = prod[L] * v;
        if (L + 1 == k_) sum += prod[L + 1];
        ++i;
      }
      acc[out.index(x)] += sum;
    }
  }
}

std::vector<Coord> EmbeddingTable::tuples() const {
  std::vector<Coord> out;
  out.reserve(leaves_ * k_ * d_);
  std::vector<std::size_t> path(k_);
  for (std::size_t i = 0; i < vertex_.size(); ++i) {
    path[level_[i]] = i;
    if (level_[i] + 1 == k_) {
      const std::size_t base = out.size();
      out.resize(base + k_ * d_);
      for (std::size_t L = 0; L < k_; ++L) {
        const std::size_t node = path[L];
        std::copy_n(&coords_[node * d_], d_, &out[base + vertex_[node] * d_]);
      }
    }
  }
  return out;
}

PinnedProfile pinned_profile(const LatticeSet& A, const SimplexSpec& simplex, std::int64_t lambda_sq_lo,
                             std::int64_t lambda_sq_hi, const PinnedProfileOptions& options) {
  require(A.dim() == simplex.dim(), "pinned_profile: dimension mismatch");
  require(lambda_sq_lo >= 1 && lambda_sq_lo <= lambda_sq_hi, "pinned_profile: empty lambda^2 range");
  PinnedProfile out;
  std::vector<EmbeddingTable> tables;
  for (std::int64_t n = lambda_sq_lo; n <= lambda_sq_hi; ++n) {
    EmbeddingTable t(simplex, RadiusClass{n}, options.enumeration);
    if (t.size() == 0) {
      out.skipped.push_back(n);
      continue;
    }
    out.lambda_sq.push_back(n);
    out.shell_sizes.push_back(t.size());
    tables.push_back(std::move(t));
  }
  require(!tables.empty(), "pinned_profile: every shell in the range is empty");

  const Box& box = A.box();
  const Coord margin = reach(simplex, RadiusClass{lambda_sq_hi});
  // Admissible pins, reservoir-sampled when capped.
  auto interior = [&](std::size_t i) {
    for (std::size_t c = box.dim(); c-- > 0;) {
      const auto e = static_cast<Coord>(box.extents()[c]);
      const auto x = static_cast<Coord>(i % box.extents()[c]);
      i /= box.extents()[c];
      if (x < margin || x >= e - margin) return false;
    }
    return true;
  };
  std::vector<std::size_t> chosen;
  std::mt19937_64 rng(options.seed);
  std::uint64_t seen = 0;
  for (std::size_t w = 0; w < A.words().size(); ++w) {
    std::uint64_t bits = A.words()[w];
    while (bits) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
      bits &= bits - 1;
      if (!interior(i)) continue;
      ++seen;
      if (options.max_pins == 0 || chosen.size() < options.max_pins) {
        chosen.push_back(i);
      } else {
        const std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, seen - 1)(rng);
        if (r < options.max_pins) chosen[r] = i;
      }
    }
  }
  require(seen > 0, "pinned_profile: no admissible pins (A empty or margin too large)");
  std::sort(chosen.begin(), chosen.end());
  out.admissible_pins = seen;
  out.sampled = chosen.size() < seen;

  // Linear offsets per table node; valid because every pin has the margin.
  std::vector<std::vector<std::int64_t>> offsets(tables.size());
  std::vector<std::vector<Coord>> flat(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) flat[t] = tables[t].tuples();
  const std::size_t d = simplex.dim(), k = simplex.k();
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto& f = flat[t];
    offsets[t].resize(f.size() / d);
    for (std::size_t r = 0; r < offsets[t].size(); ++r) {
      std::int64_t o = 0;
      for (std::size_t c = 0; c < d; ++c) o += f[r * d + c] * static_cast<std::int64_t>(box.strides()[c]);
      offsets[t][r] = o;
    }
  }

  out.pins.resize(chosen.size());
  std::vector<std::size_t> argmin(chosen.size(), 0);
  parallel_for(chosen.size(), resolve_threads(options.threads), [&](std::size_t p) {
    PinProfile& prof = out.pins[p];
    prof.pin = box.point(chosen[p]);
    const auto base = static_cast<std::int64_t>(chosen[p]);
    prof.counts.resize(tables.size());
    for (std::size_t t = 0; t < tables.size(); ++t) {
      if (k == 1) {
        std::uint64_t c = 0;
        for (auto o : offsets[t]) c += A.test_index(static_cast<std::size_t>(base + o));
        prof.counts[t] = c;
      } else {
        std::vector<const LatticeSet*> sets(k, &A);
        prof.counts[t] = tables[t].pinned_count(sets, prof.pin);
      }
    }
    std::size_t arg = 0;
    for (std::size_t t = 1; t < tables.size(); ++t)
      if (ratio_less(prof.counts[t], out.shell_sizes[t], prof.counts[arg], out.shell_sizes[arg])) arg = t;
    argmin[p] = arg;
    prof.min_value = static_cast<double>(prof.counts[arg]) / static_cast<double>(out.shell_sizes[arg]);
    prof.argmin_lambda_sq = out.lambda_sq[arg];
  });

  std::size_t best = 0;
  for (std::size_t p = 1; p < out.pins.size(); ++p) {
    const auto a = argmin[best], b = argmin[p];
    if (ratio_less(out.pins[best].counts[a], out.shell_sizes[a], out.pins[p].counts[b], out.shell_sizes[b])) best = p;
  }
  out.best_pin = best;
  out.best_value = out.pins[best].min_value;
  out.density = A.box_density();
  out.threshold = std::pow(out.density, static_cast<double>(k)) - options.epsilon;
  out.beats_threshold = out.best_value > out.threshold;
  return out;
}

MaximalFieldStats maximal_field(std::span<const GridFunction> fs, const SimplexSpec& simplex,
                                std::span<const std::int64_t> lambda_sqs, GridFunction* field, unsigned threads) {
  const std::size_t k = simplex.k(), d = simplex.dim();
  require(fs.size() == k, "maximal_field: need exactly k input functions");
  require(!lambda_sqs.empty(), "maximal_field: empty lambda^2 list");
  MaximalFieldStats stats;

  std::vector<std::vector<Coord>> tuples;
  std::vector<double> inv_size;
  Coord r = 0;
  for (auto n : lambda_sqs) {
    EmbeddingTable t(simplex, RadiusClass{n});
    if (t.size() == 0) {
      stats.skipped.push_back(n);
      continue;
    }
    stats.lambda_sq.push_back(n);
    inv_size.push_back(1.0 / static_cast<double>(t.size()));
    r = std::max(r, t.coordinate_reach());
    tuples.push_back(t.tuples());
  }
  require(!tuples.empty(), "maximal_field: every shell is empty");

  // Bounding box of all inputs.
  std::vector<Coord> lo(fs[0].box().lower().begin(), fs[0].box().lower().end());
  std::vector<Coord> hi(d);
  for (std::size_t c = 0; c < d; ++c) hi[c] = fs[0].box().upper(c);
  for (const auto& f : fs) {
    require(f.dim() == d, "maximal_field: input dimension mismatch");
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], f.box().lower()[c]);
      hi[c] = std::max(hi[c], f.box().upper(c));
    }
  }
  std::vector<std::uint64_t> ext(d);
  for (std::size_t c = 0; c < d; ++c) ext[c] = static_cast<std::uint64_t>(hi[c] - lo[c]);
  const Box U(lo, ext);
  const Box out_box = U.grown(r);
  const Box pad = U.grown(2 * r);
  std::vector<std::vector<double>> padded;
  for (const auto& f : fs) {
    auto e = f.embedded(pad);
    padded.emplace_back(e.values().begin(), e.values().end());
  }

  // Per tuple, per vertex linear offsets into the padded grid.
  std::vector<std::vector<std::int64_t>> offs(tuples.size());
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const std::size_t n = tuples[t].size() / d;
    offs[t].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t o = 0;
      for (std::size_t c = 0; c < d; ++c) o += tuples[t][i * d + c] * static_cast<std::int64_t>(pad.strides()[c]);
      offs[t][i] = o;
    }
  }

  if (field) *field = GridFunction(out_box);
  const std::size_t row_len = out_box.extents()[d - 1];
  const std::size_t rows = out_box.volume() / row_len;
  const std::size_t slabs = d == 1 ? 1 : out_box.extents()[0];
  const std::size_t rows_per_slab = rows / slabs;
  const auto& K = simd::kernels();
  struct SlabStats {
    double sq = 0, abs = 0, mx = 0;
  };
  std::vector<SlabStats> slab_stats(slabs);

  parallel_for(slabs, resolve_threads(threads), [&](std::size_t s) {
    std::vector<double> acc(row_len), maxrow(row_len), work(row_len);
    std::vector<Coord> p(d);
    SlabStats st;
    for (std::size_t rr = 0; rr < rows_per_slab; ++rr) {
      const std::size_t row = s * rows_per_slab + rr;
      const LatticeVector start = out_box.point(row * row_len);
      const auto base = static_cast<std::int64_t>(pad.index(start.coords()));
      std::fill(maxrow.begin(), maxrow.end(), 0.0);
      for (std::size_t t = 0; t < tuples.size(); ++t) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const auto& o = offs[t];
        const std::size_t ntup = o.size() / k;
        for (std::size_t u = 0; u < ntup; ++u) {
          const double* src0 = padded[0].data() + base + o[u * k];
          if (k == 1) {
            K.accumulate(acc.data(), src0, row_len);
          } else if (k == 2) {
            K.accumulate_product(acc.data(), src0, padded[1].data() + base + o[u * k + 1], row_len);
          } else {
            K.multiply(work.data(), src0, padded[1].data() + base + o[u * k + 1], row_len);
            for (std::size_t i = 2; i + 1 < k; ++i)
              K.multiply(work.data(), work.data(), padded[i].data() + base + o[u * k + i], row_len);
            K.accumulate_product(acc.data(), work.data(), padded[k - 1].data() + base + o[u * k + k - 1], row_len);
          }
        }
        K.max_abs_scaled(maxrow.data(), acc.data(), inv_size[t], row_len);
      }
      st.sq += K.sum_squares(maxrow.data(), row_len);
      for (double v : maxrow) {
        st.abs += v;
        st.mx = std::max(st.mx, v);
      }
      if (field) std::copy(maxrow.begin(), maxrow.end(), field->values().begin() + row * row_len);
    }
    slab_stats[s] = st;
  });
  for (const auto& st : slab_stats) {
    stats.sum_squares += st.sq;
    stats.sum_abs += st.abs;
    stats.max_value = std::max(stats.max_value, st.mx);
  }
  stats.sites = out_box.volume();
  return stats;
}

ProbeResult operator_norm_probe(const SimplexSpec& simplex, std::size_t box_size, std::int64_t lambda_sq_lo,
                                std::int64_t lambda_sq_hi, const ProbeOptions& options,
                                const FreqParams* restriction) {
  require(options.trials >= 1, "operator_norm_probe: trials must be >= 1");
  require(box_size >= 1, "operator_norm_probe: box size must be positive");
  require(lambda_sq_lo >= 1 && lambda_sq_lo <= lambda_sq_hi, "operator_norm_probe: empty lambda^2 range");
  const std::size_t k = simplex.k(), d = simplex.dim();
  std::size_t restricted = 0;
  if (restriction) {
    restriction->validate();
    restricted = options.restricted_input.value_or(0);
    require(restricted < k, "operator_norm_probe: restricted input index out of range");
  }
  std::vector<std::int64_t> radii;
  for (auto n = lambda_sq_lo; n <= lambda_sq_hi; ++n) radii.push_back(n);
  const Box box = Box::cube(d, 0, box_size);

  ProbeResult res;
  res.seed = options.seed;
  res.box_size = box_size;
  for (int trial = 0; trial < options.trials; ++trial) {
    std::vector<GridFunction> fs;
    double denom = 1;
    for (std::size_t i = 0; i < k; ++i) {
      GridFunction f(box);
      // Counter-based stream: value depends only on (seed, trial, input, site).
      const std::uint64_t key = splitmix64(options.seed ^ splitmix64((std::uint64_t(trial) << 8) | i));
      auto v = f.values();
      for (std::size_t s = 0; s < v.size(); ++s) {
        const std::uint64_t z = splitmix64(key + s);
        v[s] = 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
      }
      if (restriction && i == restricted) {
        const double before = f.l2_norm();
        f = project_out_omega(f, *restriction);
        // Round-off residue of a function that lies entirely on Omega.
        if (f.l2_norm() <= 1e-12 * before) f = GridFunction(box);
      }
      denom *= f.l2_norm();
      fs.push_back(std::move(f));
    }
    double ratio = 0;
    if (denom > 0) {
      auto st = maximal_field(fs, simplex, radii, nullptr, options.threads);
      if (trial == 0) {
        res.lambda_sq = st.lambda_sq;
        res.skipped = st.skipped;
      }
      ratio = std::sqrt(st.sum_squares) / denom;
    }
    res.ratios.push_back(ratio);
    res.max_ratio = std::max(res.max_ratio, ratio);
  }
  return res;
}

}  // namespace simplexlab
