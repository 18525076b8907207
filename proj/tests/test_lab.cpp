#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "simplexlab/error.hpp"
#include "simplexlab/lab.hpp"

using namespace simplexlab;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.dim = 5;
  c.simplex = "e-orthonormal:1";
  c.seed = 7;
  return c;
}

nlohmann::json without_timing(nlohmann::json j) {
  j.erase("timing");
  return j;
}

}  // namespace

TEST_CASE("lambda ranges") {
  CHECK(parse_lambda_range("7") == std::pair<std::int64_t, std::int64_t>{7, 7});
  CHECK(parse_lambda_range("16..36") == std::pair<std::int64_t, std::int64_t>{16, 36});
  CHECK_THROWS_AS(parse_lambda_range("5..2"), PreconditionError);
  CHECK_THROWS_AS(parse_lambda_range("0"), PreconditionError);
  CHECK_THROWS_AS(parse_lambda_range("x..3"), PreconditionError);
}

TEST_CASE("generator specs parse and print") {
  for (const char* s : {"bernoulli:0.3", "congruence:3", "periodic-counterexample:1,2",
                        "union:congruence:2|bernoulli:0.05"}) {
    CHECK(format_generator(parse_generator(s)) == s);
  }
  CHECK_THROWS_AS(parse_generator("lattice:2"), PreconditionError);
  CHECK_THROWS_AS(parse_generator("bernoulli:1.5"), PreconditionError);
  CHECK_THROWS_AS(parse_generator("congruence:0"), PreconditionError);
  CHECK_THROWS_AS(parse_generator("union:"), PreconditionError);
}

TEST_CASE("congruence set on a small box") {
  const auto a = generate_set(parse_generator("congruence:2"), Box::cube(2, 0, 10), 0);
  CHECK(a.cardinality() == 25);
}

TEST_CASE("periodic counterexample density over whole periods") {
  // period 4 d q M = 40, three cells per axis in Q_2
  const auto a = generate_set(parse_generator("periodic-counterexample:1,2"), Box::cube(5, -17, 40), 0);
  CHECK(a.cardinality() == 243);
  CHECK(a.box_density() == 243.0 / std::pow(40.0, 5));
  const auto b = generate_set(parse_generator("periodic-counterexample:1,3"), Box::cube(2, 5, 48), 0);
  // |Q_3 cap Z| = 3, period 24, box is two periods per axis
  CHECK(b.cardinality() == 36);
}

TEST_CASE("periodic counterexample never realizes distance qdM") {
  const auto a = generate_set(parse_generator("periodic-counterexample:1,2"), Box::cube(2, -30, 60), 0);
  // d = 2: forbidden |y| = 4
  for (const auto& x : a.members())
    for (const auto& y : a.members()) CHECK((x - y).norm_sq() != 16);
}

TEST_CASE("bernoulli generator is order independent and near delta") {
  const auto g = parse_generator("bernoulli:0.5");
  const auto a = generate_set(g, Box::cube(5, 0, 10), 12345);
  CHECK(std::abs(a.box_density() - 0.5) < 0.01);
  // a sub-box sees the same membership
  const auto b = generate_set(g, Box::cube(5, 3, 4), 12345);
  for (const auto& p : b.members()) CHECK(a.contains(p));
  CHECK(generate_set(g, Box::cube(5, 0, 10), 12345) == a);
  CHECK_FALSE(generate_set(g, Box::cube(5, 0, 10), 12346) == a);
}

TEST_CASE("union overlays its parts") {
  const Box box = Box::cube(2, 0, 12);
  const auto u = generate_set(parse_generator("union:congruence:2|congruence:3"), box, 0);
  const auto a = generate_set(parse_generator("congruence:2"), box, 0);
  const auto b = generate_set(parse_generator("congruence:3"), box, 0);
  CHECK(u.cardinality() == a.cardinality() + b.cardinality() - 4);
}

TEST_CASE("config validation") {
  auto c = base_config();
  CHECK(validate_config(c).empty());
  c.dim = 4;
  CHECK(validate_config(c).size() == 1);
  c = base_config();
  c.eta = 0.01;
  c.epsilon = 0.1;
  CHECK_THROWS_AS(validate_config(c), PreconditionError);
  c.eta = 0.001;
  CHECK_NOTHROW(validate_config(c));
  c.generator = "nope";
  CHECK_THROWS_AS(validate_config(c), PreconditionError);
}

TEST_CASE("pinned experiment on the full box") {
  auto c = base_config();
  c.generator = "bernoulli:1";
  c.box = 8;
  c.lambda_sq_lo = 1;
  c.lambda_sq_hi = 4;
  for (bool exact : {false, true}) {
    c.exact = exact;
    const auto r = pinned_experiment(c);
    CHECK(r.success);
    CHECK(r.lambda0_sq == 1);
    CHECK(r.success_fraction == 1.0);
    CHECK(r.pins.size() == 1024);  // 4^5 interior pins, margin 2
  }
}

TEST_CASE("pinned experiment fails on the periodic counterexample") {
  auto c = base_config();
  c.generator = "periodic-counterexample:1,2";
  c.box = 25;
  c.box_lower = -12;
  c.lambda_sq_lo = 95;
  c.lambda_sq_hi = 100;
  c.epsilon = 0.5 * std::pow(243.0 / std::pow(40.0, 5), 1.0);
  const auto r = pinned_experiment(c);
  CHECK_FALSE(r.success);
  CHECK_FALSE(r.lambda0_sq.has_value());
  for (const auto& p : r.pins) CHECK(p.counts.back() == 0);
}

TEST_CASE("pinned experiment on a bernoulli set") {
  auto c = base_config();
  c.generator = "bernoulli:0.5";
  c.box = 48;
  c.lambda_sq_lo = 16;
  c.lambda_sq_hi = 36;
  c.epsilon = 0.1;
  c.max_pins = 200;
  c.seed = 1;
  const auto r = pinned_experiment(c);
  CHECK(r.sampled);
  CHECK(r.success);
  CHECK(r.lambda0_sq == 16);
  CHECK(r.success_fraction > 0.9);
}

TEST_CASE("pinned experiment preconditions") {
  auto c = base_config();
  c.generator = "bernoulli:0";
  CHECK_THROWS_AS(pinned_experiment(c), PreconditionError);
  c.generator = "bernoulli:1";
  c.box = 4;
  c.lambda_sq_lo = c.lambda_sq_hi = 25;
  CHECK_THROWS_AS(pinned_experiment(c), PreconditionError);
}

TEST_CASE("q search restricts to (qZ)^d tuples") {
  auto c = base_config();
  c.generator = "congruence:2";
  c.box = 16;
  c.lambda_sq_lo = 1;
  c.lambda_sq_hi = 8;
  c.epsilon = 0.02;
  c.q_candidates = {1, 2};
  const auto r = pinned_experiment(c);
  REQUIRE(r.q_search.size() == 2);
  CHECK_FALSE(r.q_search[0].success);  // odd lambda^2 shells are empty for pins of (2Z)^5
  CHECK(r.q_search[1].lambda_sq == std::vector<std::int64_t>{4, 8});
  CHECK(r.q_search[1].best_value == 1.0);
  CHECK(r.q_search[1].success);
}

TEST_CASE("reports are deterministic and round trip") {
  auto c = base_config();
  c.generator = "bernoulli:0.4";
  c.box = 12;
  c.lambda_sq_lo = 2;
  c.lambda_sq_hi = 4;
  c.q_candidates = {1};
  const auto a = pinned_experiment(c);
  const auto b = pinned_experiment(c);
  CHECK(without_timing(to_json(a)).dump() == without_timing(to_json(b)).dump());
  const auto back = report_from_json(nlohmann::json::parse(to_json(a).dump()));
  CHECK(back == a);
  CHECK(to_json(a)["schema_version"] == kReportSchemaVersion);
}

TEST_CASE("empty report is valid json") {
  const ExperimentReport r;
  const auto j = nlohmann::json::parse(to_json(r).dump());
  CHECK(j["pins"].is_array());
  CHECK(j["pins"].empty());
  CHECK(report_from_json(j) == r);
  CHECK(report_csv(r) == "pin,lambda_sq,count,shell_size,average\n");
}

TEST_CASE("csv has a row per pin and radius") {
  ExperimentReport r;
  r.lambda_sq = {1, 2};
  r.shell_sizes = {10, 40};
  for (int i = 0; i < 3; ++i) r.pins.push_back({{i, 0}, {5, 20}, 0.5, true});
  const auto csv = report_csv(r);
  std::istringstream in(csv);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
  CHECK(csv.find("2;0,2,20,40,0.5\n") != std::string::npos);
}

TEST_CASE("emit report writes files and reports bad paths") {
  const auto dir = std::filesystem::temp_directory_path() / "simplexlab_lab_test";
  std::filesystem::create_directories(dir);
  ExperimentReport r;
  r.lambda_sq = {3};
  r.shell_sizes = {8};
  r.pins.push_back({{1, 1}, {2}, 0.25, false});
  emit_report(r, "json", (dir / "r.json").string());
  std::ifstream in(dir / "r.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(report_from_json(j) == r);
  CHECK_THROWS_AS(emit_report(r, "json", "/nonexistent-dir/r.json"), IoError);
  CHECK_THROWS_AS(emit_report(r, "xml", (dir / "r.xml").string()), PreconditionError);
}

TEST_CASE("corollary check examples") {
  auto c = base_config();
  c.box = 9;
  c.box_lower = -4;
  c.lambda_sq_lo = 1;
  c.lambda_sq_hi = 4;
  const auto r = corollary_q_check(2, c);
  CHECK(r.ok);
  const auto& e4 = r.entries[3];
  CHECK(e4.rescaled_lambda_sq == 1);
  CHECK(e4.count_min == 10);
  CHECK(e4.count_max == 10);
  CHECK(e4.rescaled_shell == 10);
  CHECK(e4.restricted_count == 10);
  for (int i : {0, 2}) {
    CHECK(r.entries[i].count_max == 0);
    CHECK(r.entries[i].restricted_count == 0);
  }
  const auto one = corollary_q_check(1, c);
  CHECK(one.ok);
  for (const auto& e : one.entries) CHECK(e.restricted_count == e.rescaled_shell);
}

TEST_CASE("corollary identity for small moduli and radii") {
  auto c = base_config();
  c.box = 13;
  c.box_lower = -6;
  c.lambda_sq_lo = 1;
  c.lambda_sq_hi = 9;
  for (std::uint64_t r = 1; r <= 3; ++r) {
    const auto rep = corollary_q_check(r, c);
    CHECK(rep.ok);
    for (const auto& e : rep.entries) CHECK(e.pins_checked > 0);
  }
}
