// simplexlab command line. One experiment per invocation; results go to
// stdout or --out as JSON (default) or CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "simplexlab/averaging.hpp"
#include "simplexlab/dirichlet.hpp"
#include "simplexlab/enumeration.hpp"
#include "simplexlab/error.hpp"
#include "simplexlab/fourier.hpp"
#include "simplexlab/lab.hpp"
#include "simplexlab/parallel.hpp"
#include "simplexlab/sampling.hpp"
#include "simplexlab/slab_io.hpp"
#include "simplexlab/theta.hpp"

using namespace simplexlab;
using nlohmann::json;

namespace {

struct Globals {
  std::size_t dim = 5;
  std::string simplex = "e-orthonormal:1";
  std::string lambda_sq = "1";
  std::uint64_t box = 32;
  Coord box_lower = 0;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format = "json";
  bool exact = false;
  unsigned threads = 1;
  std::uint64_t node_cap = 0;
};

struct Inputs {
  std::vector<std::string> paths;
  std::string generator;
};

Globals G;

SimplexSpec simplex() { return SimplexSpec::parse(G.simplex, G.dim); }
Box box() { return Box::cube(G.dim, G.box_lower, G.box); }
unsigned threads() { return resolve_threads(G.threads); }

EnumerationOptions enum_options() {
  EnumerationOptions o;
  o.threads = threads();
  o.node_cap = G.node_cap;
  return o;
}

std::vector<std::int64_t> lambda_list() {
  const auto [lo, hi] = parse_lambda_range(G.lambda_sq);
  std::vector<std::int64_t> v;
  for (auto n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

void write_text(const std::string& text) {
  if (G.out.empty() || G.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(G.out, std::ios::binary);
  if (!f) throw IoError("cannot open " + G.out + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + G.out);
}

void emit(const json& j, const std::function<std::string()>& csv = {}) {
  if (G.format == "json") return write_text(j.dump(2) + "\n");
  require(G.format == "csv", "unknown --format " + G.format + " (json | csv)");
  require(static_cast<bool>(csv), "this subcommand has no CSV form");
  write_text(csv());
}

std::string join(std::span<const Coord> p, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(p[i]);
  return s;
}

void add_inputs(CLI::App* sub, Inputs& in) {
  sub->add_option("--input", in.paths, "SLAB or JSON fixture files, one per vertex (or one shared)")->delimiter(',');
  sub->add_option("--generator", in.generator, "generate the input on --box instead, e.g. bernoulli:0.3");
}

std::vector<LatticeSet> load_sets(const Inputs& in, std::size_t k) {
  std::vector<LatticeSet> sets;
  if (!in.generator.empty()) {
    require(in.paths.empty(), "--input and --generator are exclusive");
    sets.push_back(generate_set(parse_generator(in.generator), box(), G.seed));
  } else {
    for (const auto& p : in.paths) sets.push_back(read_set(p));
  }
  require(!sets.empty(), "no input: pass --input or --generator");
  if (sets.size() == 1) sets.resize(k, sets[0]);
  require(sets.size() == k, "need one input per simplex vertex");
  return sets;
}

std::vector<GridFunction> load_functions(const Inputs& in, std::size_t k) {
  std::vector<GridFunction> fs;
  if (!in.generator.empty()) {
    for (const auto& a : load_sets(in, k)) fs.push_back(a.indicator());
    return fs;
  }
  for (const auto& p : in.paths) fs.push_back(read_function(p));
  require(!fs.empty(), "no input: pass --input or --generator");
  if (fs.size() == 1) fs.resize(k, fs[0]);
  require(fs.size() == k, "need one input per simplex vertex");
  return fs;
}

LatticeVector point_or_center(const std::vector<Coord>& at) {
  if (at.empty()) return LatticeVector(std::vector<Coord>(G.dim, G.box_lower + static_cast<Coord>(G.box / 2)));
  require(at.size() == G.dim, "--at needs --dim coordinates");
  return LatticeVector(at);
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    rows.emplace_back();
    std::stringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) {
      try {
        rows.back().push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw PreconditionError("bad matrix entry '" + cell + "'");
      }
    }
  }
  require(!rows.empty() && !rows[0].empty(), "empty matrix");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == rows[0].size(), "ragged matrix '" + text + "'");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json j = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) r.push_back(m(i, c));
    j.push_back(r);
  }
  return j;
}

FreqParams parse_jl(const std::string& text) {
  const auto comma = text.find(',');
  require(comma != std::string::npos, "--restrict wants j,l");
  try {
    return FreqParams::j_l(std::stoul(text.substr(0, comma)), std::stoul(text.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw PreconditionError("--restrict wants j,l, got '" + text + "'");
  }
}

ExperimentConfig experiment_config() {
  ExperimentConfig c;
  c.dim = G.dim;
  c.simplex = G.simplex;
  std::tie(c.lambda_sq_lo, c.lambda_sq_hi) = parse_lambda_range(G.lambda_sq);
  c.box = G.box;
  c.box_lower = G.box_lower;
  c.seed = G.seed;
  c.threads = threads();
  c.node_cap = G.node_cap;
  c.exact = G.exact;
  return c;
}

// subcommands

void cmd_enumerate(std::uint64_t list_cap, bool count_only) {
  const auto s = simplex();
  auto opt = enum_options();
  opt.list_cap = list_cap;
  json rows = json::array();
  std::string csv = "lambda_sq,tuple,vertex,coords\n";
  for (auto n : lambda_list()) {
    const auto e = simplex_embeddings(s, RadiusClass{n}, count_only ? EnumerationMode::count : EnumerationMode::list, opt);
    json r = {{"lambda_sq", n}, {"count", e.count}, {"nodes_visited", e.nodes_visited}};
    if (!count_only) {
      json tuples = json::array();
      for (std::size_t t = 0; t < e.tuples.size(); ++t) {
        json tuple = json::array();
        for (std::size_t v = 0; v < e.tuples[t].size(); ++v) {
          const auto c = e.tuples[t][v].coords();
          tuple.push_back(std::vector<Coord>(c.begin(), c.end()));
          csv += std::to_string(n) + "," + std::to_string(t) + "," + std::to_string(v + 1) + "," + join(c) + "\n";
        }
        tuples.push_back(tuple);
      }
      r["tuples"] = tuples;
    }
    rows.push_back(r);
  }
  emit({{"simplex", s.descriptor()}, {"dim", G.dim}, {"radii", rows}}, [&] {
    if (!count_only) return csv;
    std::string c = "lambda_sq,count\n";
    for (const auto& r : rows) c += std::to_string(r["lambda_sq"].get<std::int64_t>()) + "," +
                                    std::to_string(r["count"].get<std::uint64_t>()) + "\n";
    return c;
  });
}

void cmd_oracle(std::uint64_t work_cap) {
  const auto s = simplex();
  json rows = json::array();
  std::string csv = "lambda_sq,count,brute_force,match\n";
  bool all = true;
  for (auto n : lambda_list()) {
    const auto a = count_embeddings(s, RadiusClass{n}, enum_options());
    const auto b = brute_force_embeddings(s, RadiusClass{n}, work_cap);
    all = all && a == b;
    rows.push_back({{"lambda_sq", n}, {"count", a}, {"brute_force", b}, {"match", a == b}});
    csv += std::to_string(n) + "," + std::to_string(a) + "," + std::to_string(b) + "," + (a == b ? "1" : "0") + "\n";
  }
  emit({{"simplex", s.descriptor()}, {"dim", G.dim}, {"all_match", all}, {"radii", rows}}, [&] { return csv; });
}

void cmd_scaling() {
  const auto s = simplex();
  const auto radii = lambda_list();
  const auto f = count_scaling_fit(s, radii, enum_options());
  json pts = json::array();
  std::string csv = "lambda_sq,count\n";
  for (const auto& p : f.points) {
    pts.push_back({{"lambda_sq", p.lambda_sq}, {"count", p.count}});
    csv += std::to_string(p.lambda_sq) + "," + std::to_string(p.count) + "\n";
  }
  emit({{"simplex", s.descriptor()},
        {"dim", G.dim},
        {"slope", f.slope},
        {"intercept", f.intercept},
        {"predicted_exponent", f.predicted_exponent},
        {"constant_min", f.constant_min},
        {"constant_max", f.constant_max},
        {"nodes_visited", f.nodes_visited},
        {"points", pts}},
       [&] { return csv; });
}

void cmd_average(const Inputs& in, const std::vector<Coord>& at, const std::vector<std::string>& scales) {
  const auto s = simplex();
  const auto x = point_or_center(at);
  json rows = json::array();
  std::string csv = "lambda_sq,value\n";
  for (auto n : lambda_list()) {
    json r = {{"lambda_sq", n}};
    if (G.exact) {
      const auto sets = load_sets(in, s.k());
      std::vector<Rational> sc;
      for (const auto& t : scales) {
        try {
          sc.emplace_back(t);
        } catch (const std::exception&) {
          throw PreconditionError("bad --scale '" + t + "'");
        }
      }
      if (sc.empty()) sc.emplace_back(1);
      if (sc.size() == 1) sc.resize(s.k(), sc[0]);
      require(sc.size() == s.k(), "need one --scale per vertex");
      const auto v = multilinear_average_exact(sets, sc, s, RadiusClass{n}, x, enum_options());
      r["value"] = v.str();
      r["value_double"] = to_double(v);
      csv += std::to_string(n) + "," + v.str() + "\n";
    } else {
      const auto v = multilinear_average(load_functions(in, s.k()), s, RadiusClass{n}, x, enum_options());
      r["value"] = v;
      csv += std::to_string(n) + "," + std::to_string(v) + "\n";
    }
    rows.push_back(r);
  }
  const auto c = x.coords();
  emit({{"simplex", s.descriptor()}, {"x", std::vector<Coord>(c.begin(), c.end())}, {"exact", G.exact}, {"radii", rows}},
       [&] { return csv; });
}

void cmd_maximal(const Inputs& in, const std::vector<Coord>& at, const std::string& mode, int trials,
                 const std::string& restrict_jl, const std::string& field_out) {
  const auto s = simplex();
  const auto [lo, hi] = parse_lambda_range(G.lambda_sq);
  if (mode == "probe") {
    ProbeOptions o;
    o.trials = trials;
    o.seed = G.seed;
    o.threads = threads();
    std::optional<FreqParams> fp;
    if (!restrict_jl.empty()) {
      fp = parse_jl(restrict_jl);
      o.restricted_input = 0;
    }
    const auto r = operator_norm_probe(s, G.box, lo, hi, o, fp ? &*fp : nullptr);
    emit({{"simplex", s.descriptor()},
          {"box", r.box_size},
          {"seed", r.seed},
          {"restriction", fp ? fp->describe() : ""},
          {"max_ratio", r.max_ratio},
          {"ratios", r.ratios},
          {"lambda_sq", r.lambda_sq},
          {"skipped", r.skipped}},
         [&] {
           std::string c = "trial,ratio\n";
           for (std::size_t i = 0; i < r.ratios.size(); ++i) c += std::to_string(i) + "," + std::to_string(r.ratios[i]) + "\n";
           return c;
         });
    return;
  }
  const auto fs = load_functions(in, s.k());
  if (mode == "field") {
    GridFunction field;
    const auto radii = lambda_list();
    const auto st = maximal_field(fs, s, radii, field_out.empty() ? nullptr : &field, threads());
    if (!field_out.empty()) write_slab(field_out, field);
    emit({{"simplex", s.descriptor()},
          {"sites", st.sites},
          {"sum_squares", st.sum_squares},
          {"l2", std::sqrt(st.sum_squares)},
          {"sum_abs", st.sum_abs},
          {"max_value", st.max_value},
          {"lambda_sq", st.lambda_sq},
          {"skipped", st.skipped}});
    return;
  }
  require(mode == "point", "--mode is point | field | probe");
  const auto x = point_or_center(at);
  const auto m = maximal_function(fs, s, lo, hi, x, enum_options());
  const auto c = x.coords();
  emit({{"simplex", s.descriptor()},
        {"x", std::vector<Coord>(c.begin(), c.end())},
        {"value", m.value},
        {"argmax_lambda_sq", m.argmax_lambda_sq},
        {"skipped", m.skipped}});
}

void cmd_pinned(const std::string& generator, double epsilon, double eta, const std::vector<std::uint64_t>& qs,
                std::uint64_t max_pins) {
  auto c = experiment_config();
  c.generator = generator;
  c.epsilon = epsilon;
  c.eta = eta;
  c.q_candidates = qs;
  c.max_pins = max_pins;
  for (const auto& w : validate_config(c)) std::cerr << "warning: " << w << "\n";
  const auto t0 = std::chrono::steady_clock::now();
  auto r = pinned_experiment(c);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit_report(r, G.format, G.out);
}

void cmd_uniformity(const Inputs& in, double eta) {
  const auto a = load_sets(in, 1)[0];
  const auto u = uniformity_test(a, eta);
  emit({{"is_uniform", u.is_uniform},
        {"q", u.q},
        {"residues", u.residues},
        {"density", u.density},
        {"ratio", u.ratio},
        {"threshold", u.threshold},
        {"worst_residue", u.worst_residue}});
}

void cmd_u1(const Inputs& in, std::uint64_t q, std::uint64_t L) {
  const auto f = load_functions(in, 1)[0];
  const auto u = u1_norm(f, f.box(), q, L);
  const double fourier = u1_norm_fourier(f, f.box(), q, L);
  emit({{"q", q}, {"L", L}, {"literal", u.literal}, {"fourier", fourier}, {"interior", u.interior},
        {"interior_sites", u.interior_sites}},
       [&] {
         std::ostringstream s;
         s.precision(17);
         s << "q,L,literal,fourier,interior,interior_sites\n"
           << q << "," << L << "," << u.literal << "," << fourier << "," << u.interior << "," << u.interior_sites << "\n";
         return s.str();
       });
}

void cmd_decompose(const Inputs& in, unsigned l, const std::string& parts_dir) {
  const auto f = load_functions(in, 1)[0];
  const auto t = telescoping_decompose(f, l);
  json parts = json::array();
  for (std::size_t i = 0; i < t.parts.size(); ++i) {
    std::string path;
    if (!parts_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(parts_dir, ec);
      if (ec) throw IoError("cannot create " + parts_dir + ": " + ec.message());
      path = (std::filesystem::path(parts_dir) / ("part_" + std::to_string(i) + ".slab")).string();
      write_slab(path, t.parts[i]);
    }
    parts.push_back({{"index", i}, {"l2", t.parts[i].l2_norm()}, {"sup", t.parts[i].sup_norm()}, {"path", path}});
  }
  emit({{"l", t.l}, {"J", t.J}, {"reconstruction_error", t.reconstruction_error}, {"parts", parts}});
}

void cmd_ortho(const std::vector<unsigned>& js, const std::vector<unsigned>& l_maxes, std::size_t random,
               std::size_t grid, unsigned leak_l, std::size_t d) {
  json rows = json::array();
  std::string csv = "j,l_max,l_min,terms,max_sum,leak\n";
  for (unsigned j : js) {
    const auto samples = orthogonality_samples(j, d, random, G.seed, grid);
    double leak = -1;
    if (leak_l >= (1u << j)) leak = frequency_leak(leak_l, j, d).max_outside;
    for (unsigned lm : l_maxes) {
      const auto r = orthogonality_probe(j, lm, samples);
      rows.push_back({{"j", j}, {"l_max", lm}, {"l_min", r.l_min}, {"terms", r.terms}, {"max_sum", r.max_sum},
                      {"argmax_xi", samples[r.argmax]}, {"leak", leak}});
      std::ostringstream s;
      s.precision(17);
      s << j << "," << lm << "," << r.l_min << "," << r.terms << "," << r.max_sum << "," << leak << "\n";
      csv += s.str();
    }
  }
  emit({{"dim", d}, {"leak_l", leak_l}, {"rows", rows}}, [&] { return csv; });
}

void cmd_theta(const std::string& X, const std::string& Y, const std::string& sx, const std::string& se, double tol,
               double radius) {
  ThetaArgs a;
  a.X = parse_matrix(X);
  a.Y = parse_matrix(Y);
  const auto k = a.X.rows();
  a.script_X = sx.empty() ? Eigen::MatrixXd::Zero(G.dim, k) : parse_matrix(sx);
  a.script_E = se.empty() ? Eigen::MatrixXd::Zero(a.script_X.rows(), k) : parse_matrix(se);
  a.tolerance = tol;
  a.radius = radius;
  const auto v = theta_truncated(a);
  emit({{"k", k},
        {"d", a.script_X.rows()},
        {"Z", {{"re", matrix_json(a.X)}, {"im", matrix_json(a.Y)}}},
        {"X_script", matrix_json(a.script_X)},
        {"E_script", matrix_json(a.script_E)},
        {"R", v.radius},
        {"value_re", v.value.real()},
        {"value_im", v.value.imag()},
        {"tail_bound", v.tail_bound},
        {"terms", v.terms}});
}

void cmd_dirichlet(const std::vector<unsigned>& Ks, double s, const std::vector<unsigned>& js, std::uint64_t n_max) {
  json rows = json::array();
  std::string csv = "j,s,K,N_max,sum,bound,ratio\n";
  for (unsigned K : Ks) {
    const DirichletTable t(K, n_max);
    for (unsigned j : js) {
      const auto r = tail_sum(t, s, j);
      rows.push_back({{"j", j}, {"s", s}, {"K", K}, {"N_max", n_max}, {"sum", r.sum}, {"bound", r.bound},
                      {"ratio", r.ratio}, {"remainder_estimate", r.remainder_estimate},
                      {"remainder_ok", r.remainder_ok}});
      std::ostringstream o;
      o.precision(17);
      o << j << "," << s << "," << K << "," << n_max << "," << r.sum << "," << r.bound << "," << r.ratio << "\n";
      csv += o.str();
    }
  }
  emit(rows, [&] { return csv; });
}

void cmd_corollary(std::uint64_t r) {
  const auto rep = corollary_q_check(r, experiment_config());
  emit(to_json(rep), [&] {
    std::string c = "lambda_sq,rescaled_lambda_sq,pins,mismatches,count_min,count_max,restricted,rescaled_shell,ok\n";
    for (const auto& e : rep.entries)
      c += std::to_string(e.lambda_sq) + "," + (e.rescaled_lambda_sq ? std::to_string(*e.rescaled_lambda_sq) : "") +
           "," + std::to_string(e.pins_checked) + "," + std::to_string(e.mismatches) + "," +
           std::to_string(e.count_min) + "," + std::to_string(e.count_max) + "," +
           std::to_string(e.restricted_count) + "," + std::to_string(e.rescaled_shell) + "," + (e.ok ? "1" : "0") +
           "\n";
    return c;
  });
}

void cmd_generate(const std::string& generator, const std::string& set_out) {
  const auto spec = parse_generator(generator);
  const auto a = generate_set(spec, box(), G.seed);
  if (!set_out.empty()) {
    if (set_out.ends_with(".json")) {
      json pts = json::array();
      for (const auto& p : a.members()) pts.push_back(std::vector<Coord>(p.coords().begin(), p.coords().end()));
      std::ofstream f(set_out);
      if (!f) throw IoError("cannot open " + set_out + " for writing");
      f << json{{"lower", std::vector<Coord>(G.dim, G.box_lower)}, {"extents", std::vector<std::uint64_t>(G.dim, G.box)},
                {"points", pts}}
               .dump()
        << "\n";
      if (!f) throw IoError("write failed: " + set_out);
    } else {
      write_slab(set_out, a);
    }
  }
  emit({{"generator", format_generator(spec)},
        {"seed", G.seed},
        {"dim", G.dim},
        {"box", G.box},
        {"box_lower", G.box_lower},
        {"cardinality", a.cardinality()},
        {"box_density", a.box_density()},
        {"path", set_out}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simplexlab: lattice simplices in dense sets"};
  app.set_config("--config", "", "TOML-style key = value file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--dim", G.dim, "ambient dimension d")->capture_default_str();
  app.add_option("--simplex", G.simplex, "e-orthonormal:k or vertex rows a,b,c;d,e,f")->capture_default_str();
  app.add_option("--lambda-sq", G.lambda_sq, "lambda^2 as n or a..b")->capture_default_str();
  app.add_option("--box", G.box, "box side")->capture_default_str();
  app.add_option("--box-lower", G.box_lower, "lower corner coordinate of the box")->capture_default_str();
  app.add_option("--seed", G.seed)->capture_default_str();
  app.add_option("--out", G.out, "output path, - for stdout")->capture_default_str();
  app.add_option("--format", G.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--exact", G.exact, "rational arithmetic where supported");
  app.add_option("--threads", G.threads, "0 = hardware concurrency")->capture_default_str();
  app.add_option("--node-cap", G.node_cap, "enumeration node cap, 0 = none")->capture_default_str();

  std::vector<std::function<void()>> run(1);
  auto on = [&](CLI::App* sub, std::function<void()> fn) { sub->callback([&run, fn] { run[0] = fn; }); };

  auto* enumerate = app.add_subcommand("enumerate", "list or count S_{lambda Delta}");
  static std::uint64_t list_cap = 100000;
  static bool count_only = false;
  enumerate->add_option("--list-cap", list_cap)->capture_default_str();
  enumerate->add_flag("--count-only", count_only);
  on(enumerate, [] { cmd_enumerate(list_cap, count_only); });

  auto* oracle = app.add_subcommand("oracle", "pruned search against brute force");
  static std::uint64_t work_cap = 200'000'000;
  oracle->add_option("--work-cap", work_cap)->capture_default_str();
  on(oracle, [] { cmd_oracle(work_cap); });

  auto* scaling = app.add_subcommand("scaling", "log-log fit of |S_{lambda Delta}| over the lambda^2 range");
  on(scaling, [] { cmd_scaling(); });

  static Inputs avg_in;
  static std::vector<Coord> avg_at;
  static std::vector<std::string> avg_scale;
  auto* average = app.add_subcommand("average", "multilinear average at a point");
  add_inputs(average, avg_in);
  average->add_option("--at", avg_at, "evaluation point, default the box center")->delimiter(',');
  average->add_option("--scale", avg_scale, "rational scales c_i for --exact, e.g. 3/7")->delimiter(',');
  on(average, [] { cmd_average(avg_in, avg_at, avg_scale); });

  static Inputs max_in;
  static std::vector<Coord> max_at;
  static std::string max_mode = "point", max_restrict, max_field_out;
  static int max_trials = 20;
  auto* maximal = app.add_subcommand("maximal", "sup over the lambda window: at a point, over a field, or a norm probe");
  add_inputs(maximal, max_in);
  maximal->add_option("--at", max_at)->delimiter(',');
  maximal->add_option("--mode", max_mode, "point | field | probe")->capture_default_str();
  maximal->add_option("--trials", max_trials, "probe trials")->capture_default_str();
  maximal->add_option("--restrict", max_restrict, "probe: project input 1 off Omega_{j,l}, given as j,l");
  maximal->add_option("--field-out", max_field_out, "field: write the maximal field as SLAB");
  on(maximal, [] { cmd_maximal(max_in, max_at, max_mode, max_trials, max_restrict, max_field_out); });

  static std::string pin_gen = "bernoulli:0.5";
  static double pin_eps = 0.1, pin_eta = 0;
  static std::vector<std::uint64_t> pin_q;
  static std::uint64_t pin_max = 0;
  auto* pinned = app.add_subcommand("pinned", "pinned-simplex experiment");
  pinned->add_option("--generator", pin_gen)->capture_default_str();
  pinned->add_option("--epsilon", pin_eps)->capture_default_str();
  pinned->add_option("--eta", pin_eta, "0 = unused")->capture_default_str();
  pinned->add_option("--q", pin_q, "q candidates for the restricted search")->delimiter(',');
  pinned->add_option("--max-pins", pin_max, "0 = every admissible pin")->capture_default_str();
  on(pinned, [] { cmd_pinned(pin_gen, pin_eps, pin_eta, pin_q, pin_max); });

  static Inputs uni_in;
  static double uni_eta = 0.5;
  auto* uniformity = app.add_subcommand("uniformity", "residue-class density test against 1 + eta^4");
  add_inputs(uniformity, uni_in);
  uniformity->add_option("--eta", uni_eta)->capture_default_str();
  on(uniformity, [] { cmd_uniformity(uni_in, uni_eta); });

  static Inputs u1_in;
  static std::uint64_t u1_q = 1, u1_L = 4;
  auto* u1 = app.add_subcommand("u1", "U^1(q, L) norm, spatial and Fourier");
  add_inputs(u1, u1_in);
  u1->add_option("--q", u1_q)->capture_default_str();
  u1->add_option("--L", u1_L)->capture_default_str();
  on(u1, [] { cmd_u1(u1_in, u1_q, u1_L); });

  static Inputs dec_in;
  static unsigned dec_l = 16;
  static std::string dec_dir;
  auto* decompose = app.add_subcommand("decompose", "telescoping split f = f*Psi_0 + sum f*DeltaPsi_j + rest");
  add_inputs(decompose, dec_in);
  decompose->add_option("--l", dec_l)->capture_default_str();
  decompose->add_option("--parts-dir", dec_dir, "write each part as SLAB here");
  on(decompose, [] { cmd_decompose(dec_in, dec_l, dec_dir); });

  static std::vector<unsigned> ortho_j{0, 1, 2, 3}, ortho_lmax{16, 32, 64};
  static std::size_t ortho_random = 200, ortho_grid = 3, ortho_d = 2;
  static unsigned ortho_leak = 16;
  auto* ortho = app.add_subcommand("ortho-probe", "sampled sum over l of |DeltaPsi_{l,j}^|^2 and Omega leak");
  ortho->add_option("--j", ortho_j)->capture_default_str()->delimiter(',');
  ortho->add_option("--l-max", ortho_lmax)->capture_default_str()->delimiter(',');
  ortho->add_option("--random", ortho_random, "random torus samples")->capture_default_str();
  ortho->add_option("--grid", ortho_grid, "rational grid numerators per axis")->capture_default_str();
  ortho->add_option("--leak-l", ortho_leak, "l for the leak measurement")->capture_default_str();
  ortho->add_option("--sample-dim", ortho_d, "torus dimension")->capture_default_str();
  on(ortho, [] { cmd_ortho(ortho_j, ortho_lmax, ortho_random, ortho_grid, ortho_leak, ortho_d); });

  static std::string th_X = "0", th_Y = "1", th_sx, th_se;
  static double th_tol = 1e-14, th_R = 0;
  auto* theta = app.add_subcommand("theta", "truncated Siegel theta sum");
  theta->add_option("--X", th_X, "real part of Z, rows a,b;c,d")->capture_default_str();
  theta->add_option("--Y", th_Y, "imaginary part of Z, positive definite")->capture_default_str();
  theta->add_option("--script-x", th_sx, "d x k, default zero with d = --dim");
  theta->add_option("--script-e", th_se, "d x k, default zero");
  theta->add_option("--tol", th_tol)->capture_default_str();
  theta->add_option("--radius", th_R, "fixed per-row radius, 0 = from --tol")->capture_default_str();
  on(theta, [] { cmd_theta(th_X, th_Y, th_sx, th_se, th_tol, th_R); });

  static std::vector<unsigned> dir_K{1}, dir_j{1, 2, 3, 4, 5};
  static double dir_s = 1.5;
  static std::uint64_t dir_n = 100000;
  auto* dirichlet = app.add_subcommand("dirichlet", "tail of sum b_K(n) n^-s over n not dividing q_j");
  dirichlet->add_option("--K", dir_K)->capture_default_str()->delimiter(',');
  dirichlet->add_option("--s", dir_s)->capture_default_str();
  dirichlet->add_option("--j", dir_j)->capture_default_str()->delimiter(',');
  dirichlet->add_option("--n-max", dir_n)->capture_default_str();
  on(dirichlet, [] { cmd_dirichlet(dir_K, dir_s, dir_j, dir_n); });

  static std::uint64_t cor_r = 2;
  auto* corollary = app.add_subcommand("corollary-q", "rescaling check on (rZ)^d");
  corollary->add_option("--r", cor_r)->capture_default_str();
  on(corollary, [] { cmd_corollary(cor_r); });

  static std::string gen_spec = "bernoulli:0.5", gen_out;
  auto* generate = app.add_subcommand("generate", "materialize a generated set");
  generate->add_option("--generator", gen_spec)->capture_default_str();
  generate->add_option("--set-out", gen_out, "write the set (.json fixture or SLAB)");
  on(generate, [] { cmd_generate(gen_spec, gen_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    run[0]();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
