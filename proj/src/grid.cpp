#include "simplexlab/grid.hpp"

#include <bit>
#include <cmath>

#include "simplexlab/error.hpp"

namespace simplexlab {

Box::Box(std::vector<Coord> lower, std::vector<std::uint64_t> extents)
    : lower_(std::move(lower)), extents_(std::move(extents)) {
  require(lower_.size() == extents_.size(), "box: lower corner and extents differ in length");
  require(!lower_.empty(), "box: dimension must be positive");
  strides_.assign(lower_.size(), 1);
  unsigned __int128 vol = 1;
  for (std::size_t a = lower_.size(); a-- > 0;) {
    strides_[a] = static_cast<std::size_t>(vol);
    vol *= extents_[a];
    if (vol > (static_cast<unsigned __int128>(1) << 48))
      throw ResourceLimitError("box: volume exceeds 2^48 sites");
  }
  volume_ = static_cast<std::size_t>(vol);
}

Box Box::cube(std::size_t dim, Coord lower, std::uint64_t side) {
  return Box(std::vector<Coord>(dim, lower), std::vector<std::uint64_t>(dim, side));
}

Box Box::centered(std::size_t dim, std::uint64_t side) {
  return cube(dim, -static_cast<Coord>(side / 2), side);
}

bool Box::contains(std::span<const Coord> p) const {
  if (p.size() != lower_.size()) return false;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const Coord off = p[a] - lower_[a];
    if (off < 0 || static_cast<std::uint64_t>(off) >= extents_[a]) return false;
  }
  return true;
}

bool Box::contains_with_margin(std::span<const Coord> p, Coord margin) const {
  if (p.size() != lower_.size()) return false;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] - margin < lower_[a]) return false;
    if (p[a] + margin >= upper(a)) return false;
  }
  return true;
}

std::size_t Box::index(std::span<const Coord> p) const {
  std::size_t i = 0;
  for (std::size_t a = 0; a < p.size(); ++a) i += static_cast<std::size_t>(p[a] - lower_[a]) * strides_[a];
  return i;
}

LatticeVector Box::point(std::size_t index) const {
  LatticeVector p(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    p[a] = lower_[a] + static_cast<Coord>(index / strides_[a]);
    index %= strides_[a];
  }
  return p;
}

Box Box::grown(Coord pad) const {
  std::vector<Coord> lo(lower_);
  std::vector<std::uint64_t> ex(extents_);
  for (std::size_t a = 0; a < lo.size(); ++a) {
    lo[a] -= pad;
    ex[a] += static_cast<std::uint64_t>(2 * pad);
  }
  return Box(std::move(lo), std::move(ex));
}

Box Box::translated(std::span<const Coord> t) const {
  require(t.size() == dim(), "box: translation dimension mismatch");
  std::vector<Coord> lo(lower_);
  for (std::size_t a = 0; a < lo.size(); ++a) lo[a] += t[a];
  return Box(std::move(lo), extents_);
}

void for_each_point(const Box& box, const std::function<void(std::span<const Coord>)>& fn) {
  if (box.volume() == 0) return;
  std::vector<Coord> p(box.lower().begin(), box.lower().end());
  const std::size_t d = box.dim();
  while (true) {
    fn(p);
    std::size_t a = d;
    while (a-- > 0) {
      if (++p[a] < box.upper(a)) break;
      p[a] = box.lower()[a];
      if (a == 0) return;
    }
  }
}

GridFunction::GridFunction(Box box, double fill) : box_(std::move(box)), values_(box_.volume(), fill) {}

GridFunction::GridFunction(Box box, std::vector<double> values)
    : box_(std::move(box)), values_(std::move(values)) {
  require(values_.size() == box_.volume(), "grid function: value count differs from box volume");
}

double GridFunction::at(std::span<const Coord> p) const {
  if (!box_.contains(p)) return 0.0;
  return values_[box_.index(p)];
}

void GridFunction::set(std::span<const Coord> p, double v) {
  require(box_.contains(p), "grid function: write outside the box");
  values_[box_.index(p)] = v;
}

double GridFunction::l2_norm() const {
  double s = 0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double GridFunction::sup_norm() const {
  double m = 0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::sum() const {
  double s = 0;
  for (double v : values_) s += v;
  return s;
}

GridFunction GridFunction::translated(std::span<const Coord> t) const {
  return GridFunction(box_.translated(t), values_);
}

GridFunction GridFunction::embedded(const Box& larger) const {
  require(larger.dim() == dim(), "grid function: embedding dimension mismatch");
  GridFunction out(larger);
  std::size_t i = 0;
  for_each_point(box_, [&](std::span<const Coord> p) {
    if (larger.contains(p)) out.values_[larger.index(p)] = values_[i];
    else require(values_[i] == 0.0, "grid function: embedding would drop non-zero values");
    ++i;
  });
  return out;
}

LatticeSet::LatticeSet(Box box) : box_(std::move(box)), bits_((box_.volume() + 63) / 64, 0) {}

bool LatticeSet::contains(std::span<const Coord> p) const {
  if (!box_.contains(p)) return false;
  return test_index(box_.index(p));
}

void LatticeSet::insert(std::span<const Coord> p) {
  require(box_.contains(p), "lattice set: insertion outside the box");
  set_index(box_.index(p), true);
}

void LatticeSet::set_index(std::size_t i, bool member) {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (member) bits_[i >> 6] |= bit;
  else bits_[i >> 6] &= ~bit;
}

std::uint64_t LatticeSet::cardinality() const {
  std::uint64_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

double LatticeSet::box_density() const {
  if (box_.volume() == 0) return 0.0;
  return static_cast<double>(cardinality()) / static_cast<double>(box_.volume());
}

GridFunction LatticeSet::indicator() const {
  GridFunction f(box_);
  auto v = f.values();
  for (std::size_t i = 0; i < box_.volume(); ++i) v[i] = test_index(i) ? 1.0 : 0.0;
  return f;
}

std::vector<LatticeVector> LatticeSet::members() const {
  std::vector<LatticeVector> out;
  for (std::size_t i = 0; i < box_.volume(); ++i)
    if (test_index(i)) out.push_back(box_.point(i));
  return out;
}

}  // namespace simplexlab
