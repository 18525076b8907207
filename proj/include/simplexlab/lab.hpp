#pragma once

// Experiment harness: seeded set generators, pinned-simplex experiments, the
// rescaling check for congruence sets, and versioned JSON / CSV reports.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "simplexlab/grid.hpp"
#include "simplexlab/lattice.hpp"

namespace simplexlab {

inline constexpr int kReportSchemaVersion = 1;

/// "a..b" or a single integer.
std::pair<std::int64_t, std::int64_t> parse_lambda_range(std::string_view text);

struct GeneratorSpec {
  std::string kind = "bernoulli";  // bernoulli | congruence | periodic-counterexample | union
  double delta = 0.5;
  std::uint64_t r = 2;
  std::uint64_t q = 1, M = 2;
  std::vector<GeneratorSpec> parts;  // union only

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// bernoulli:0.3, congruence:2, periodic-counterexample:1,2, union:<spec>|<spec>...
GeneratorSpec parse_generator(std::string_view text);
std::string format_generator(const GeneratorSpec& g);

/// Membership of p depends only on (seed, p, part index), never on fill order.
LatticeSet generate_set(const GeneratorSpec& spec, const Box& box, std::uint64_t seed);
/// x in the periodic counterexample (Q_{qM} cap Z^d) + (4 d q M Z)^d.
bool in_periodic_counterexample(std::span<const Coord> x, std::uint64_t q, std::uint64_t M);

struct ExperimentConfig {
  std::size_t dim = 5;
  std::string simplex = "e-orthonormal:1";
  std::string generator = "bernoulli:0.5";
  std::int64_t lambda_sq_lo = 1, lambda_sq_hi = 1;
  std::uint64_t box = 32;
  Coord box_lower = 0;
  double epsilon = 0.1;
  double eta = 0;  // 0: unused; otherwise must satisfy eta <= epsilon^2 / 10
  std::vector<std::uint64_t> q_candidates;  // empty: only q = 1
  std::uint64_t seed = 1;
  std::uint64_t max_pins = 0;
  unsigned threads = 1;
  std::uint64_t node_cap = 0;
  bool exact = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws on hard violations; returns advisory warnings (d < 2k + 3).
std::vector<std::string> validate_config(const ExperimentConfig& c);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct PinRecord {
  std::vector<Coord> pin;
  std::vector<std::uint64_t> counts;  // per report lambda_sq
  double min_value = 0;
  bool success = false;

  friend bool operator==(const PinRecord&, const PinRecord&) = default;
};

struct QTrial {
  std::uint64_t q = 1;
  std::vector<std::int64_t> lambda_sq;  // window entries divisible by q^2 with a non-empty shell
  double best_value = 0;
  bool success = false;

  friend bool operator==(const QTrial&, const QTrial&) = default;
};

struct ExperimentReport {
  std::string experiment = "pinned";
  ExperimentConfig config;
  double density = 0;  // box density, the surrogate for the upper Banach density
  double threshold = 0;
  std::vector<std::int64_t> lambda_sq;
  std::vector<std::uint64_t> shell_sizes;
  std::vector<std::int64_t> skipped;
  std::vector<PinRecord> pins;
  std::uint64_t admissible_pins = 0;
  bool sampled = false;
  std::size_t best_pin = 0;
  double best_value = 0;
  bool success = false;
  std::optional<std::int64_t> lambda0_sq;  // smallest window start some pin survives
  double success_fraction = 0;
  std::vector<QTrial> q_search;
  std::vector<std::string> warnings;
  // excluded from determinism comparisons
  std::string generated_at;
  double runtime_seconds = 0;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

ExperimentReport pinned_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const nlohmann::json& j);
/// One row per pin and radius: pin,lambda_sq,count,shell_size,average.
std::string report_csv(const ExperimentReport& r);
/// format "json" or "csv"; throws IoError with the path on failure.
void emit_report(const ExperimentReport& r, const std::string& format, const std::string& path);

struct CorollaryEntry {
  std::int64_t lambda_sq = 0;
  std::optional<std::int64_t> rescaled_lambda_sq;  // lambda^2 / r^2 when integral
  std::uint64_t pins_checked = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t count_min = 0, count_max = 0;  // pinned counts in A
  std::uint64_t restricted_count = 0;          // tuples of S_{lambda Delta} inside (rZ)^{dk}
  std::uint64_t rescaled_shell = 0;            // |S_{(lambda/r) Delta}|, 0 when not integral
  bool ok = false;
};

struct CorollaryReport {
  std::uint64_t r = 1;
  std::size_t dim = 0;
  std::string simplex;
  std::vector<CorollaryEntry> entries;
  bool ok = false;
};

/// A = (rZ)^d cap box against phi(A) = (A - s) / r, enumerated independently.
CorollaryReport corollary_q_check(std::uint64_t r, const ExperimentConfig& config);
nlohmann::json to_json(const CorollaryReport& r);

}  // namespace simplexlab
