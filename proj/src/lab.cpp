#include "simplexlab/lab.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>

#include "simplexlab/averaging.hpp"
#include "simplexlab/enumeration.hpp"
#include "simplexlab/error.hpp"
#include "simplexlab/rational.hpp"

namespace simplexlab {

using nlohmann::json;

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

template <class T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw PreconditionError(std::string(what) + ": bad number '" + std::string(s) + "'");
  return v;
}

std::string shortest(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// one axis of (Q_{qM} cap Z) + 4 d q M Z
bool periodic_axis(Coord c, std::size_t d, std::uint64_t q, std::uint64_t M) {
  const auto side = static_cast<Coord>(q * M);
  const auto period = static_cast<Coord>(4 * d) * side;
  Coord m = ((c % period) + period) % period;
  if (2 * m > period) m -= period;
  return 2 * std::abs(m) <= side;
}

void check_generator(const GeneratorSpec& g) {
  if (g.kind == "bernoulli") {
    require(g.delta >= 0 && g.delta <= 1, "bernoulli: delta must lie in [0, 1]");
  } else if (g.kind == "congruence") {
    require(g.r >= 1, "congruence: r must be >= 1");
  } else if (g.kind == "periodic-counterexample") {
    require(g.q >= 1 && g.M >= 1, "periodic-counterexample: q, M must be >= 1");
  } else if (g.kind == "union") {
    require(!g.parts.empty(), "union: needs at least one part");
    for (const auto& p : g.parts) check_generator(p);
  } else {
    throw PreconditionError("unknown generator kind '" + g.kind + "'");
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

std::pair<std::int64_t, std::int64_t> parse_lambda_range(std::string_view text) {
  const auto dots = text.find("..");
  std::int64_t lo, hi;
  if (dots == std::string_view::npos) {
    lo = hi = parse_number<std::int64_t>(text, "lambda-sq");
  } else {
    lo = parse_number<std::int64_t>(text.substr(0, dots), "lambda-sq");
    hi = parse_number<std::int64_t>(text.substr(dots + 2), "lambda-sq");
  }
  require(lo >= 1 && lo <= hi, "lambda-sq: need 1 <= a <= b");
  return {lo, hi};
}

GeneratorSpec parse_generator(std::string_view text) {
  GeneratorSpec g;
  const auto colon = text.find(':');
  g.kind = std::string(text.substr(0, colon));
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (g.kind == "bernoulli") {
    if (!args.empty()) g.delta = parse_number<double>(args, "bernoulli");
  } else if (g.kind == "congruence") {
    if (!args.empty()) g.r = parse_number<std::uint64_t>(args, "congruence");
  } else if (g.kind == "periodic-counterexample") {
    if (!args.empty()) {
      const auto comma = args.find(',');
      require(comma != std::string_view::npos, "periodic-counterexample: expected q,M");
      g.q = parse_number<std::uint64_t>(args.substr(0, comma), "periodic-counterexample");
      g.M = parse_number<std::uint64_t>(args.substr(comma + 1), "periodic-counterexample");
    }
  } else if (g.kind == "union") {
    std::size_t start = 0;
    while (start <= args.size()) {
      const auto bar = args.find('|', start);
      const auto piece = args.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
      require(!piece.empty(), "union: empty part");
      g.parts.push_back(parse_generator(piece));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
  }
  check_generator(g);
  return g;
}

std::string format_generator(const GeneratorSpec& g) {
  if (g.kind == "bernoulli") return "bernoulli:" + shortest(g.delta);
  if (g.kind == "congruence") return "congruence:" + std::to_string(g.r);
  if (g.kind == "periodic-counterexample") return "periodic-counterexample:" + std::to_string(g.q) + "," + std::to_string(g.M);
  std::string s = "union:";
  for (std::size_t i = 0; i < g.parts.size(); ++i) s += (i ? "|" : "") + format_generator(g.parts[i]);
  return s;
}

bool in_periodic_counterexample(std::span<const Coord> x, std::uint64_t q, std::uint64_t M) {
  for (Coord c : x)
    if (!periodic_axis(c, x.size(), q, M)) return false;
  return true;
}

namespace {

bool axis_member(const GeneratorSpec& g, Coord c, std::size_t d) {
  if (g.kind == "congruence") return c % static_cast<Coord>(g.r) == 0;
  return periodic_axis(c, d, g.q, g.M);
}

// OR membership of one row (all but the last coordinate fixed) into mask.
void fill_row(const GeneratorSpec& g, std::uint64_t seed, std::uint64_t part, std::span<const Coord> prefix,
              Coord last_lower, std::vector<char>& mask) {
  const std::size_t n = mask.size(), d = prefix.size() + 1;
  if (g.kind == "bernoulli") {
    std::uint64_t h = mix(seed ^ mix(part + 1));
    for (Coord c : prefix) h = mix(h ^ static_cast<std::uint64_t>(c));
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t v = mix(h ^ static_cast<std::uint64_t>(last_lower + static_cast<Coord>(i)));
      mask[i] |= static_cast<double>(v >> 11) * 0x1.0p-53 < g.delta;
    }
  } else if (g.kind == "union") {
    for (std::size_t i = 0; i < g.parts.size(); ++i) fill_row(g.parts[i], seed, part * 64 + i + 1, prefix, last_lower, mask);
  } else {
    for (Coord c : prefix)
      if (!axis_member(g, c, d)) return;
    for (std::size_t i = 0; i < n; ++i) mask[i] |= axis_member(g, last_lower + static_cast<Coord>(i), d);
  }
}

}  // namespace

LatticeSet generate_set(const GeneratorSpec& spec, const Box& box, std::uint64_t seed) {
  check_generator(spec);
  LatticeSet a(box);
  const std::size_t d = box.dim();
  if (box.volume() == 0) return a;
  const std::size_t n = box.extents()[d - 1];
  std::vector<Coord> prefix(box.lower().begin(), box.lower().end() - 1);
  std::vector<char> mask(n);
  for (std::size_t row = 0; row < box.volume() / n; ++row) {
    std::fill(mask.begin(), mask.end(), 0);
    fill_row(spec, seed, 0, prefix, box.lower()[d - 1], mask);
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) a.set_index(row * n + i, true);
    for (std::size_t c = d - 1; c-- > 0;) {
      if (++prefix[c] < box.upper(c)) break;
      prefix[c] = box.lower()[c];
    }
  }
  return a;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  require(c.dim >= 1, "config: dim must be >= 1");
  require(c.box >= 1, "config: box must be >= 1");
  require(c.lambda_sq_lo >= 1 && c.lambda_sq_lo <= c.lambda_sq_hi, "config: need 1 <= lambda_sq_lo <= lambda_sq_hi");
  require(c.epsilon > 0 && c.epsilon < 1, "config: epsilon must lie in (0, 1)");
  require(c.eta >= 0, "config: eta must be >= 0");
  if (c.eta > 0) require(c.eta <= c.epsilon * c.epsilon / 10, "config: eta must satisfy eta <= epsilon^2 / 10");
  for (auto q : c.q_candidates) require(q >= 1, "config: q candidates must be >= 1");
  parse_generator(c.generator);
  const SimplexSpec s = SimplexSpec::parse(c.simplex, c.dim);
  std::vector<std::string> warnings;
  if (c.dim < 2 * s.k() + 3)
    warnings.push_back("d = " + std::to_string(c.dim) + " is below 2k+3 = " + std::to_string(2 * s.k() + 3) +
                       ", outside the proven range");
  return warnings;
}

json to_json(const ExperimentConfig& c) {
  return json{{"dim", c.dim},
              {"simplex", c.simplex},
              {"generator", c.generator},
              {"lambda_sq", {c.lambda_sq_lo, c.lambda_sq_hi}},
              {"box", c.box},
              {"box_lower", c.box_lower},
              {"epsilon", c.epsilon},
              {"eta", c.eta},
              {"q_candidates", c.q_candidates},
              {"seed", c.seed},
              {"max_pins", c.max_pins},
              {"threads", c.threads},
              {"node_cap", c.node_cap},
              {"exact", c.exact}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  j.at("dim").get_to(c.dim);
  j.at("simplex").get_to(c.simplex);
  j.at("generator").get_to(c.generator);
  c.lambda_sq_lo = j.at("lambda_sq").at(0).get<std::int64_t>();
  c.lambda_sq_hi = j.at("lambda_sq").at(1).get<std::int64_t>();
  j.at("box").get_to(c.box);
  j.at("box_lower").get_to(c.box_lower);
  j.at("epsilon").get_to(c.epsilon);
  j.at("eta").get_to(c.eta);
  j.at("q_candidates").get_to(c.q_candidates);
  j.at("seed").get_to(c.seed);
  j.at("max_pins").get_to(c.max_pins);
  j.at("threads").get_to(c.threads);
  j.at("node_cap").get_to(c.node_cap);
  j.at("exact").get_to(c.exact);
  return c;
}

ExperimentReport pinned_experiment(const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.config = c;
  rep.warnings = validate_config(c);
  const SimplexSpec simplex = SimplexSpec::parse(c.simplex, c.dim);
  const std::size_t k = simplex.k();
  const LatticeSet A = generate_set(parse_generator(c.generator), Box::cube(c.dim, c.box_lower, c.box), c.seed);
  require(A.cardinality() > 0, "pinned_experiment: the generated set is empty");

  PinnedProfileOptions opts;
  opts.max_pins = c.max_pins;
  opts.seed = c.seed;
  opts.epsilon = c.epsilon;
  opts.threads = c.threads;
  opts.enumeration.node_cap = c.node_cap;
  const PinnedProfile prof = pinned_profile(A, simplex, c.lambda_sq_lo, c.lambda_sq_hi, opts);

  rep.density = prof.density;
  rep.threshold = prof.threshold;
  rep.lambda_sq = prof.lambda_sq;
  rep.shell_sizes = prof.shell_sizes;
  rep.skipped = prof.skipped;
  rep.admissible_pins = prof.admissible_pins;
  rep.sampled = prof.sampled;
  rep.best_pin = prof.best_pin;
  rep.best_value = prof.best_value;

  // value > density^k - eps, exactly when requested
  const Rational box_density(BigInt(A.cardinality()), BigInt(A.box().volume()));
  Rational exact_threshold = 1;
  for (std::size_t i = 0; i < k; ++i) exact_threshold *= box_density;
  exact_threshold -= Rational(c.epsilon);
  auto beats = [&](std::uint64_t count, std::uint64_t shell) {
    if (c.exact) return Rational(BigInt(count), BigInt(shell)) > exact_threshold;
    return static_cast<double>(count) / static_cast<double>(shell) > rep.threshold;
  };

  const std::size_t T = rep.lambda_sq.size();
  std::size_t successes = 0;
  std::vector<std::size_t> first_ok(prof.pins.size(), T);  // smallest start whose suffix survives
  for (std::size_t p = 0; p < prof.pins.size(); ++p) {
    const auto& pp = prof.pins[p];
    PinRecord rec;
    rec.pin.assign(pp.pin.coords().begin(), pp.pin.coords().end());
    rec.counts = pp.counts;
    rec.min_value = pp.min_value;
    std::size_t st = T;
    while (st > 0 && beats(pp.counts[st - 1], rep.shell_sizes[st - 1])) --st;
    first_ok[p] = st;
    rec.success = st == 0;
    successes += rec.success;
    rep.pins.push_back(std::move(rec));
  }
  rep.success = successes > 0;
  rep.success_fraction = static_cast<double>(successes) / static_cast<double>(rep.pins.size());
  std::size_t best_start = T;
  for (auto s : first_ok) best_start = std::min(best_start, s);
  if (best_start < T) rep.lambda0_sq = rep.lambda_sq[best_start];

  for (std::uint64_t q : c.q_candidates) {
    QTrial trial;
    trial.q = q;
    const auto q2 = static_cast<std::int64_t>(q * q);
    std::vector<std::vector<Coord>> tuples;
    std::vector<std::uint64_t> sizes;
    for (std::int64_t n = c.lambda_sq_lo; n <= c.lambda_sq_hi; ++n) {
      if (n % q2) continue;
      EmbeddingTable t(simplex, RadiusClass{n / q2}, opts.enumeration);
      if (t.size() == 0) continue;
      trial.lambda_sq.push_back(n);
      sizes.push_back(t.size());
      tuples.push_back(t.tuples());
    }
    if (!trial.lambda_sq.empty()) {
      const std::size_t d = c.dim;
      std::vector<Coord> y(d);
      bool any = false;
      for (const auto& pin : rep.pins) {
        double worst = INFINITY;
        bool ok = true;
        for (std::size_t t = 0; t < tuples.size(); ++t) {
          std::uint64_t count = 0;
          const auto& f = tuples[t];
          for (std::size_t r = 0; r < f.size(); r += k * d) {
            bool all = true;
            for (std::size_t i = 0; i < k && all; ++i) {
              for (std::size_t cc = 0; cc < d; ++cc) y[cc] = pin.pin[cc] + static_cast<Coord>(q) * f[r + i * d + cc];
              all = A.contains(y);
            }
            count += all;
          }
          worst = std::min(worst, static_cast<double>(count) / static_cast<double>(sizes[t]));
          ok = ok && beats(count, sizes[t]);
        }
        trial.best_value = std::max(trial.best_value, worst);
        any = any || ok;
      }
      trial.success = any;
    }
    rep.q_search.push_back(std::move(trial));
  }

  rep.generated_at = utc_now();
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

json to_json(const ExperimentReport& r) {
  json pins = json::array();
  for (const auto& p : r.pins)
    pins.push_back({{"pin", p.pin}, {"counts", p.counts}, {"min_value", p.min_value}, {"success", p.success}});
  json qs = json::array();
  for (const auto& q : r.q_search)
    qs.push_back({{"q", q.q}, {"lambda_sq", q.lambda_sq}, {"best_value", q.best_value}, {"success", q.success}});
  return json{{"schema_version", kReportSchemaVersion},
              {"experiment", r.experiment},
              {"config", to_json(r.config)},
              {"density", {{"value", r.density}, {"kind", "box density (surrogate for upper Banach density)"}}},
              {"threshold", r.threshold},
              {"lambda_sq", r.lambda_sq},
              {"shell_sizes", r.shell_sizes},
              {"skipped", r.skipped},
              {"pins", pins},
              {"admissible_pins", r.admissible_pins},
              {"sampled", r.sampled},
              {"best_pin", r.best_pin},
              {"best_value", r.best_value},
              {"success", r.success},
              {"lambda0_sq", r.lambda0_sq ? json(*r.lambda0_sq) : json(nullptr)},
              {"success_fraction", r.success_fraction},
              {"q_search", qs},
              {"warnings", r.warnings},
              {"timing", {{"generated_at", r.generated_at}, {"runtime_seconds", r.runtime_seconds}}}};
}

ExperimentReport report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) throw IoError("report: unsupported schema version");
    ExperimentReport r;
    j.at("experiment").get_to(r.experiment);
    r.config = config_from_json(j.at("config"));
    r.density = j.at("density").at("value").get<double>();
    j.at("threshold").get_to(r.threshold);
    j.at("lambda_sq").get_to(r.lambda_sq);
    j.at("shell_sizes").get_to(r.shell_sizes);
    j.at("skipped").get_to(r.skipped);
    for (const auto& p : j.at("pins")) {
      PinRecord rec;
      p.at("pin").get_to(rec.pin);
      p.at("counts").get_to(rec.counts);
      p.at("min_value").get_to(rec.min_value);
      p.at("success").get_to(rec.success);
      r.pins.push_back(std::move(rec));
    }
    j.at("admissible_pins").get_to(r.admissible_pins);
    j.at("sampled").get_to(r.sampled);
    j.at("best_pin").get_to(r.best_pin);
    j.at("best_value").get_to(r.best_value);
    j.at("success").get_to(r.success);
    if (!j.at("lambda0_sq").is_null()) r.lambda0_sq = j["lambda0_sq"].get<std::int64_t>();
    j.at("success_fraction").get_to(r.success_fraction);
    for (const auto& q : j.at("q_search")) {
      QTrial t;
      q.at("q").get_to(t.q);
      q.at("lambda_sq").get_to(t.lambda_sq);
      q.at("best_value").get_to(t.best_value);
      q.at("success").get_to(t.success);
      r.q_search.push_back(std::move(t));
    }
    j.at("warnings").get_to(r.warnings);
    j.at("timing").at("generated_at").get_to(r.generated_at);
    j.at("timing").at("runtime_seconds").get_to(r.runtime_seconds);
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("report: ") + e.what());
  }
}

std::string report_csv(const ExperimentReport& r) {
  std::string s = "pin,lambda_sq,count,shell_size,average\n";
  for (const auto& p : r.pins) {
    std::string pin;
    for (std::size_t c = 0; c < p.pin.size(); ++c) pin += (c ? ";" : "") + std::to_string(p.pin[c]);
    for (std::size_t t = 0; t < r.lambda_sq.size(); ++t) {
      const double avg = static_cast<double>(p.counts[t]) / static_cast<double>(r.shell_sizes[t]);
      s += pin + "," + std::to_string(r.lambda_sq[t]) + "," + std::to_string(p.counts[t]) + "," +
           std::to_string(r.shell_sizes[t]) + "," + shortest(avg) + "\n";
    }
  }
  return s;
}

void emit_report(const ExperimentReport& r, const std::string& format, const std::string& path) {
  if (format == "json") {
    write_file(path, to_json(r).dump(2) + "\n");
  } else if (format == "csv") {
    write_file(path, report_csv(r));
  } else {
    throw PreconditionError("unknown report format '" + format + "'");
  }
}

CorollaryReport corollary_q_check(std::uint64_t r, const ExperimentConfig& c) {
  require(r >= 1, "corollary_q_check: r must be >= 1");
  validate_config(c);
  const SimplexSpec simplex = SimplexSpec::parse(c.simplex, c.dim);
  const std::size_t d = c.dim;
  const Box box = Box::cube(d, c.box_lower, c.box);
  GeneratorSpec g;
  g.kind = "congruence";
  g.r = r;
  const LatticeSet A = generate_set(g, box, c.seed);

  // phi(x) = (x - s) / r onto the box [0, n)^d
  const auto rr = static_cast<Coord>(r);
  std::vector<Coord> s(d);
  std::vector<std::uint64_t> n(d);
  for (std::size_t a = 0; a < d; ++a) {
    Coord first = box.lower()[a];
    while (first % rr) ++first;
    s[a] = first;
    n[a] = first < box.upper(a) ? static_cast<std::uint64_t>((box.upper(a) - 1 - first) / rr + 1) : 0;
    require(n[a] > 0, "corollary_q_check: box holds no multiple of r");
  }
  LatticeSet B(Box(std::vector<Coord>(d, 0), n));
  auto phi = [&](std::span<const Coord> x) {
    LatticeVector v(d);
    for (std::size_t a = 0; a < d; ++a) v[a] = (x[a] - s[a]) / rr;
    return v;
  };
  const auto members = A.members();
  for (const auto& x : members) B.insert(phi(x.coords()).coords());

  EnumerationOptions eo;
  eo.node_cap = c.node_cap;
  eo.threads = c.threads;
  CorollaryReport rep;
  rep.r = r;
  rep.dim = d;
  rep.simplex = simplex.descriptor();
  rep.ok = true;
  for (std::int64_t l2 = c.lambda_sq_lo; l2 <= c.lambda_sq_hi; ++l2) {
    CorollaryEntry e;
    e.lambda_sq = l2;
    const auto r2 = static_cast<std::int64_t>(r * r);
    if (l2 % r2 == 0) e.rescaled_lambda_sq = l2 / r2;
    const Coord margin = reach(simplex, RadiusClass{l2});
    std::vector<const LatticeVector*> pins;
    for (const auto& x : members)
      if (box.contains_with_margin(x.coords(), margin)) pins.push_back(&x);
    require(!pins.empty(), "corollary_q_check: no pin has the margin for lambda^2 = " + std::to_string(l2));
    const std::size_t stride = c.max_pins && pins.size() > c.max_pins ? pins.size() / c.max_pins : 1;
    const EmbeddingTable full(simplex, RadiusClass{l2}, eo);
    std::optional<EmbeddingTable> rescaled;
    if (e.rescaled_lambda_sq) rescaled.emplace(simplex, RadiusClass{*e.rescaled_lambda_sq}, eo);
    e.count_min = UINT64_MAX;
    for (std::size_t i = 0; i < pins.size(); i += stride) {
      const std::uint64_t cnt = full.pinned_count(A, *pins[i]);
      ++e.pins_checked;
      e.count_min = std::min(e.count_min, cnt);
      e.count_max = std::max(e.count_max, cnt);
      const std::uint64_t want = rescaled ? rescaled->pinned_count(B, phi(pins[i]->coords())) : 0;
      if (cnt != want) ++e.mismatches;
    }
    const auto flat = full.tuples();
    const std::size_t width = simplex.k() * d;
    for (std::size_t t = 0; t < flat.size(); t += width) {
      bool all = true;
      for (std::size_t i = 0; i < width && all; ++i) all = flat[t + i] % rr == 0;
      e.restricted_count += all;
    }
    if (e.rescaled_lambda_sq) e.rescaled_shell = count_embeddings(simplex, RadiusClass{*e.rescaled_lambda_sq}, eo);
    e.ok = e.mismatches == 0 && e.restricted_count == e.rescaled_shell;
    rep.ok = rep.ok && e.ok;
    rep.entries.push_back(e);
  }
  return rep;
}

json to_json(const CorollaryReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"lambda_sq", e.lambda_sq},
                       {"rescaled_lambda_sq", e.rescaled_lambda_sq ? json(*e.rescaled_lambda_sq) : json(nullptr)},
                       {"pins_checked", e.pins_checked},
                       {"mismatches", e.mismatches},
                       {"count_min", e.count_min},
                       {"count_max", e.count_max},
                       {"restricted_count", e.restricted_count},
                       {"rescaled_shell", e.rescaled_shell},
                       {"ok", e.ok}});
  return json{{"schema_version", kReportSchemaVersion},
              {"experiment", "corollary-q"},
              {"r", r.r},
              {"dim", r.dim},
              {"simplex", r.simplex},
              {"entries", entries},
              {"ok", r.ok}};
}

}  // namespace simplexlab
