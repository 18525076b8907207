#pragma once

// Finite axis-aligned boxes in Z^d, real-valued grid functions on them
// (zero-extended to all of Z^d) and dense bit-array lattice subsets.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "simplexlab/lattice.hpp"

namespace simplexlab {

/// lower + [0, extents) in every axis. Storage order is row-major: the last
/// axis is contiguous.
class Box {
 public:
  Box() = default;
  Box(std::vector<Coord> lower, std::vector<std::uint64_t> extents);
  /// The cube [lower, lower + side)^d.
  static Box cube(std::size_t dim, Coord lower, std::uint64_t side);
  /// {t0 + [-N/2, N/2)}^d: the half-open cube of side N around t0.
  static Box centered(std::size_t dim, std::uint64_t side);

  std::size_t dim() const noexcept { return lower_.size(); }
  std::span<const Coord> lower() const noexcept { return lower_; }
  std::span<const std::uint64_t> extents() const noexcept { return extents_; }
  std::span<const std::size_t> strides() const noexcept { return strides_; }
  std::size_t volume() const noexcept { return volume_; }
  Coord upper(std::size_t axis) const { return lower_[axis] + static_cast<Coord>(extents_[axis]); }

  bool contains(std::span<const Coord> p) const;
  /// Caller guarantees contains(p).
  std::size_t index(std::span<const Coord> p) const;
  LatticeVector point(std::size_t index) const;

  /// Sites whose distance to the box boundary (per axis) is at least margin.
  bool contains_with_margin(std::span<const Coord> p, Coord margin) const;

  Box grown(Coord pad) const;
  Box translated(std::span<const Coord> t) const;

  friend bool operator==(const Box& a, const Box& b) {
    return a.lower_ == b.lower_ && a.extents_ == b.extents_;
  }

 private:
  std::vector<Coord> lower_;
  std::vector<std::uint64_t> extents_;
  std::vector<std::size_t> strides_;
  std::size_t volume_ = 0;
};

/// Calls fn(point) for every site of the box in storage order.
void for_each_point(const Box& box, const std::function<void(std::span<const Coord>)>& fn);

class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(Box box, double fill = 0.0);
  GridFunction(Box box, std::vector<double> values);

  const Box& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// f(p), exactly 0 outside the box.
  double at(std::span<const Coord> p) const;
  double at(const LatticeVector& p) const { return at(p.coords()); }
  void set(std::span<const Coord> p, double v);

  double l2_norm() const;
  double sup_norm() const;
  double sum() const;

  GridFunction translated(std::span<const Coord> t) const;
  /// Same function stored on a larger box (values outside the old box are 0).
  GridFunction embedded(const Box& larger) const;

 private:
  Box box_;
  std::vector<double> values_;
};

class LatticeSet {
 public:
  LatticeSet() = default;
  explicit LatticeSet(Box box);

  const Box& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return box_.dim(); }

  bool contains(std::span<const Coord> p) const;
  bool contains(const LatticeVector& p) const { return contains(p.coords()); }
  bool test_index(std::size_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
  void insert(std::span<const Coord> p);
  void set_index(std::size_t i, bool member);

  std::uint64_t cardinality() const;
  /// |A cap box| / |box|: the finite-box surrogate for the upper Banach density.
  double box_density() const;
  GridFunction indicator() const;

  std::span<const std::uint64_t> words() const noexcept { return bits_; }
  std::span<std::uint64_t> words() noexcept { return bits_; }

  std::vector<LatticeVector> members() const;

  friend bool operator==(const LatticeSet& a, const LatticeSet& b) {
    return a.box_ == b.box_ && a.bits_ == b.bits_;
  }

 private:
  Box box_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace simplexlab
