#pragma once

// Lattice spheres S_lambda and simplex embedding sets S_{lambda Delta}: counting,
// listing, a brute-force oracle and the log-log scaling fit.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simplexlab/grid.hpp"
#include "simplexlab/lattice.hpp"

namespace simplexlab {

enum class EnumerationMode { count, list };

struct EnumerationOptions {
  std::uint64_t node_cap = 0;  // 0: unlimited
  std::uint64_t list_cap = 0;  // list mode refuses to run without one
  unsigned threads = 1;
  std::size_t chunk = 32;  // first-level vectors per work item
  // Processes work items in a shuffled order; only used to test that
  // reductions do not depend on the schedule.
  std::optional<std::uint64_t> partition_shuffle_seed;
};

struct SphereSet {
  std::size_t dim = 0;
  RadiusClass radius;
  std::vector<LatticeVector> points;
};

/// Lexicographically sorted S_lambda. max_points == 0 means unlimited.
SphereSet sphere_points(std::size_t dim, std::int64_t lambda_sq, std::uint64_t max_points = 0);

struct EmbeddingSet {
  SimplexSpec simplex;
  RadiusClass radius;
  EnumerationMode mode = EnumerationMode::count;
  std::vector<std::vector<LatticeVector>> tuples;  // list mode only, vertex order
  std::uint64_t count = 0;
  std::uint64_t nodes_visited = 0;
};

EmbeddingSet simplex_embeddings(const SimplexSpec& simplex, RadiusClass radius,
                                EnumerationMode mode = EnumerationMode::count,
                                const EnumerationOptions& options = {});

std::uint64_t count_embeddings(const SimplexSpec& simplex, RadiusClass radius,
                               const EnumerationOptions& options = {});

/// Filters the full Cartesian product of per-vector norm shells.
/// work_cap bounds box scan plus product size.
std::uint64_t brute_force_embeddings(const SimplexSpec& simplex, RadiusClass radius,
                                     std::uint64_t work_cap = 200'000'000);

struct ScalingPoint {
  std::int64_t lambda_sq;
  std::uint64_t count;
};

struct ScalingFit {
  double slope = 0;
  double intercept = 0;
  double predicted_exponent = 0;  // dk - k(k+1)
  // min/max of count * lambda^(-predicted) over fitted radii
  double constant_min = 0;
  double constant_max = 0;
  std::vector<ScalingPoint> points;
  std::uint64_t nodes_visited = 0;
};

ScalingFit count_scaling_fit(const SimplexSpec& simplex, std::span<const std::int64_t> lambda_sq_list,
                             const EnumerationOptions& options = {});

/// Smallest per-axis margin such that x + lambda*Delta-type tuples stay in a box.
Coord reach(const SimplexSpec& simplex, RadiusClass radius);

/// Number of tuples in S_{lambda Delta} with x + y_i in A for every i.
std::uint64_t pinned_count(const LatticeSet& A, const LatticeVector& x, const SimplexSpec& simplex,
                           RadiusClass radius, const EnumerationOptions& options = {});

/// "a,b,c;d,e,f": vectors comma separated, tuple entries semicolon separated.
std::string format_tuple(std::span<const LatticeVector> tuple);

}  // namespace simplexlab
