#pragma once

// Multilinear averages A_{lambda Delta}(f_1..f_k)(x), their sup over a lambda
// window, pinned profiles of indicator functions and empirical operator-norm
// probes on finite grids. Functions are zero outside their boxes.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "simplexlab/enumeration.hpp"
#include "simplexlab/grid.hpp"
#include "simplexlab/rational.hpp"

namespace simplexlab {

struct FreqParams;

/// Streams S_{lambda Delta}; zero factors prune their subtree. Throws
/// PreconditionError when the shell is empty.
double multilinear_average(std::span<const GridFunction> fs, const SimplexSpec& simplex, RadiusClass radius,
                           const LatticeVector& x, const EnumerationOptions& options = {});

/// Exact mode for inputs c_i * 1_{A_i}: prod c_i * #{tuples with x + y_i in A_i} / |S_{lambda Delta}|.
Rational multilinear_average_exact(std::span<const LatticeSet> sets, std::span<const Rational> scales,
                                   const SimplexSpec& simplex, RadiusClass radius, const LatticeVector& x,
                                   const EnumerationOptions& options = {});

struct MaximalValue {
  double value = 0;
  std::int64_t argmax_lambda_sq = 0;
  std::vector<std::int64_t> skipped;  // empty shells inside the window
};

/// sup over lambda^2 in [lo, hi] of |A_{lambda Delta}(f)(x)|. Empty shells are
/// skipped and reported.
MaximalValue maximal_function(std::span<const GridFunction> fs, const SimplexSpec& simplex, std::int64_t lambda_sq_lo,
                              std::int64_t lambda_sq_hi, const LatticeVector& x,
                              const EnumerationOptions& options = {});

/// S_{lambda Delta} stored as a prefix tree in search order, so pointwise
/// evaluation can drop every tuple that shares a vanishing prefix.
class EmbeddingTable {
 public:
  EmbeddingTable(const SimplexSpec& simplex, RadiusClass radius, const EnumerationOptions& options = {});

  std::size_t dim() const { return d_; }
  std::size_t k() const { return k_; }
  RadiusClass radius() const { return radius_; }
  std::uint64_t size() const { return leaves_; }
  std::size_t node_count() const { return vertex_.size(); }
  /// Largest |y_c| over all tuples and coordinates.
  Coord coordinate_reach() const { return coord_reach_; }

  /// Tuples with x + y_i in A for all i (A shared by every vertex).
  std::uint64_t pinned_count(const LatticeSet& A, const LatticeVector& x) const;
  /// Same, with one set per vertex.
  std::uint64_t pinned_count(std::span<const LatticeSet* const> sets, const LatticeVector& x) const;
  /// Sum over tuples of prod_i f_i(x + y_i) (not normalized).
  double sum_products(std::span<const GridFunction* const> fs, const LatticeVector& x) const;

  /// acc[out.index(x)] += sum_products(fs, x) for every x in out, driven by the
  /// support of the first vertex's input instead of by x.
  void accumulate_products(std::span<const GridFunction* const> fs, const Box& out, std::span<double> acc) const;

  /// Flattened k*d coordinates per tuple, vertex order.
  std::vector<Coord> tuples() const;

 private:
  std::size_t d_ = 0, k_ = 0;
  RadiusClass radius_;
  std::uint64_t leaves_ = 0;
  Coord coord_reach_ = 0;
  // Preorder: vertex index, subtree end, coordinates (d per node).
  std::vector<std::uint32_t> vertex_;
  std::vector<std::uint32_t> level_;
  std::vector<std::uint32_t> end_;
  std::vector<Coord> coords_;
};

struct PinProfile {
  LatticeVector pin;
  std::vector<std::uint64_t> counts;  // per evaluated lambda^2
  double min_value = 0;
  std::int64_t argmin_lambda_sq = 0;
};

struct PinnedProfileOptions {
  std::uint64_t max_pins = 0;  // 0: every admissible pin; else a seeded uniform sample
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  unsigned threads = 1;
  EnumerationOptions enumeration;
};

struct PinnedProfile {
  std::vector<std::int64_t> lambda_sq;      // evaluated (non-empty) shells
  std::vector<std::uint64_t> shell_sizes;   // |S_{lambda Delta}| for each
  std::vector<std::int64_t> skipped;        // empty shells
  std::vector<PinProfile> pins;
  std::uint64_t admissible_pins = 0;
  bool sampled = false;
  double density = 0;     // box-density surrogate of A
  double threshold = 0;   // density^k - epsilon
  std::size_t best_pin = 0;
  double best_value = 0;  // max over pins of the min over lambda
  bool beats_threshold = false;
};

/// Pins are the points of A whose margin covers the largest lambda in the window.
PinnedProfile pinned_profile(const LatticeSet& A, const SimplexSpec& simplex, std::int64_t lambda_sq_lo,
                             std::int64_t lambda_sq_hi, const PinnedProfileOptions& options = {});

struct MaximalFieldStats {
  double sum_squares = 0;  // sum_x sup_lambda |A f(x)|^2
  double sum_abs = 0;
  double max_value = 0;
  std::uint64_t sites = 0;
  std::vector<std::int64_t> lambda_sq;
  std::vector<std::int64_t> skipped;
};

/// sup_lambda |A_{lambda Delta}(f)(x)| over every x where it can be non-zero
/// (the union of the input boxes grown by the coordinate reach), computed along
/// contiguous rows with the SIMD kernels. Optional field output.
MaximalFieldStats maximal_field(std::span<const GridFunction> fs, const SimplexSpec& simplex,
                                std::span<const std::int64_t> lambda_sqs, GridFunction* field = nullptr,
                                unsigned threads = 1);

struct ProbeOptions {
  int trials = 20;
  std::uint64_t seed = 1;
  std::optional<std::size_t> restricted_input;  // index of the input projected off Omega
  unsigned threads = 1;
};

struct ProbeResult {
  double max_ratio = 0;
  std::vector<double> ratios;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> lambda_sq;
  std::vector<std::int64_t> skipped;
  std::size_t box_size = 0;
};

/// max over seeded trials of ||sup_lambda A(f)||_2 / prod ||f_i||_2 for f_i
/// i.i.d. uniform on [-1, 1] over [0, box_size)^d. With `restriction`, one input
/// has its DFT coefficients on Omega zeroed first.
ProbeResult operator_norm_probe(const SimplexSpec& simplex, std::size_t box_size, std::int64_t lambda_sq_lo,
                                std::int64_t lambda_sq_hi, const ProbeOptions& options = {},
                                const FreqParams* restriction = nullptr);

}  // namespace simplexlab
