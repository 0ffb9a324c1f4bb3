// rauzy: command-line front end. Results go to stdout as JSON or CSV, logs to
// stderr. Exit codes: 0 ok, 1 invariant violated, 2 bad input, 3 budget too
// small, 4 IO.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "rauzy/checks.hpp"
#include "rauzy/dimension.hpp"
#include "rauzy/error.hpp"
#include "rauzy/io.hpp"
#include "rauzy/markov_map.hpp"
#include "rauzy/measure.hpp"
#include "rauzy/random.hpp"
#include "rauzy/rauzy_graph.hpp"
#include "rauzy/soi.hpp"

using namespace rauzy;

namespace {

enum Exit { kOk = 0, kViolated = 1, kBadInput = 2, kBudget = 3, kIo = 4 };

struct Common {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string format = "json";
  std::string flags;
};

void log(const std::string& msg) { std::cerr << "rauzy: " << msg << '\n'; }

std::uint64_t default_seed() {
  const char* env = std::getenv("RAUZY_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "RAUZY_SEED is not an unsigned integer");
}

Provenance provenance(const Common& c) { return Provenance{kVersion, c.seed, c.flags}; }

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

Rational parse_length(const std::string& text) { return Rational::parse(text); }

// step -------------------------------------------------------------------------

struct StepArgs {
  std::vector<std::string> lengths;
  bool accelerated = false;
  long iters = 20;
};

void csv_row(std::ostringstream& out, long it, const std::string& outcome, int winner, long n, const std::string& branch,
             const SpecialSystem* s) {
  out << it << ',' << outcome << ',' << winner << ',' << n << ',' << branch;
  for (int i = 0; i < 3; ++i) out << ',' << (s ? rational_text(s->lengths().values[static_cast<std::size_t>(i)]) : "");
  out << '\n';
}

int cmd_step(const StepArgs& a, const Common& c) {
  SpecialSystem s = SpecialSystem::make(parse_length(a.lengths[0]), parse_length(a.lengths[1]), parse_length(a.lengths[2]));
  json records = json::array();
  std::ostringstream csv;
  csv << "iteration,outcome,winner,n,branch,l1,l2,l3\n";
  std::string stopped = "iterations";
  for (long it = 1; it <= a.iters; ++it) {
    if (a.accelerated) {
      auto out = accelerated_step(s);
      if (auto* k = std::get_if<AcceleratedContinue>(&out)) {
        s = k->system;
        records.push_back({{"iteration", it},
                           {"outcome", "continue"},
                           {"winner", k->winner.label()},
                           {"n", k->n},
                           {"branch", to_string(k->branch)},
                           {"system", to_json(s)},
                           {"matrix", to_json(k->length_matrix)}});
        csv_row(csv, it, "continue", k->winner.label(), k->n, to_string(k->branch), &s);
        continue;
      }
      if (auto* h = std::get_if<HoleAfter>(&out)) {
        records.push_back({{"iteration", it}, {"outcome", "hole"}, {"wins_before_hole", h->k}});
        csv_row(csv, it, "hole", s.order().largest().label(), h->k, "", nullptr);
        stopped = "hole";
      } else {
        records.push_back({{"iteration", it}, {"outcome", "tie"}, {"reason", std::get<TieOutcome>(out).reason}});
        csv_row(csv, it, "tie", 0, 0, "", nullptr);
        stopped = "tie";
      }
      break;
    }
    auto out = rauzy_step(s);
    if (auto* k = std::get_if<StepContinue>(&out)) {
      s = k->system;
      records.push_back({{"iteration", it},
                         {"outcome", "continue"},
                         {"winner", k->winner.label()},
                         {"n", 1},
                         {"branch", to_string(k->branch)},
                         {"system", to_json(s)},
                         {"matrix", to_json(k->length_matrix)}});
      csv_row(csv, it, "continue", k->winner.label(), 1, to_string(k->branch), &s);
      continue;
    }
    if (std::holds_alternative<HoleOutcome>(out)) {
      records.push_back({{"iteration", it}, {"outcome", "hole"}});
      csv_row(csv, it, "hole", 0, 0, "", nullptr);
      stopped = "hole";
    } else {
      records.push_back({{"iteration", it}, {"outcome", "tie"}, {"reason", std::get<TieOutcome>(out).reason}});
      csv_row(csv, it, "tie", 0, 0, "", nullptr);
      stopped = "tie";
    }
    break;
  }
  if (c.format == "csv") {
    std::cout << csv.str();
  } else {
    emit({{"accelerated", a.accelerated}, {"records", records}, {"stopped", stopped}});
  }
  return kOk;
}

// classify ---------------------------------------------------------------------

int cmd_classify(const std::vector<std::string>& lengths, long max_iters, const Common& c) {
  SpecialSystem s = SpecialSystem::make(parse_length(lengths[0]), parse_length(lengths[1]), parse_length(lengths[2]));
  ThinVerdict v = classify_thin(s, max_iters);
  std::string verdict;
  long k = 0;
  if (auto* sv = std::get_if<Survived>(&v)) {
    verdict = "survived";
    k = sv->iterations;
  } else if (auto* h = std::get_if<HoleAt>(&v)) {
    verdict = "hole";
    k = h->k;
  } else {
    verdict = "tie";
    k = std::get<TieAt>(v).k;
  }
  if (c.format == "csv") {
    std::cout << "verdict,k\n" << verdict << ',' << k << '\n';
  } else {
    emit({{"system", to_json(s)}, {"verdict", verdict}, {"k", k}, {"max_iters", max_iters}});
  }
  return kOk;
}

// graph ------------------------------------------------------------------------

int cmd_graph(const Common& c) {
  RauzyGraph g = RauzyGraph::build();
  if (c.format == "dot") {
    std::cout << to_dot(g);
  } else if (c.format == "text") {
    std::cout << to_text(g);
  } else {
    emit(to_json(g));
  }
  return kOk;
}

// cylinders --------------------------------------------------------------------

int cmd_cylinders(int depth, long ncap, const std::string& floor, const Common& c) {
  EnumerationOptions o;
  o.depth = depth;
  o.ncap = ncap;
  o.measure_floor = Rational::parse(floor);
  bool csv = c.format == "csv";
  if (csv) std::cout << "kind,path,measure,survives\n";
  std::size_t count = 0;
  enumerate_cylinders(o, [&](const Cylinder& cyl) {
    ++count;
    if (csv) {
      std::string path;
      for (const auto& e : cyl.path.edges)
        path += (path.empty() ? "" : " ") + std::to_string(e.winner.label()) + ":" + to_string(e.branch) + ":" +
                std::to_string(e.n);
      std::cout << to_string(cyl.kind) << ',' << path << ',' << rational_text(cyl.measure) << ','
                << (cyl.survives ? "true" : "false") << '\n';
    } else {
      std::cout << to_json(cyl).dump() << '\n';
    }
  });
  log("emitted " + std::to_string(count) + " records");
  return kOk;
}

// dimension --------------------------------------------------------------------

int cmd_dimension(DimensionConfig cfg, const Common& c) {
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  auto start = std::chrono::steady_clock::now();
  DimensionReport r = run_dimension(cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log("dimension pipeline took " + std::to_string(secs) + " s");
  if (c.format == "csv") {
    std::cout << dimension_csv(r);
  } else {
    json j = to_json(r);
    j["seconds"] = secs;
    j["provenance"] = to_json(provenance(c));
    emit(j);
  }
  return kOk;
}

// tail -------------------------------------------------------------------------

int cmd_tail(TailOptions o, const Common& c) {
  o.seed = c.seed;
  o.workers = c.workers;
  TailCurve t = roof_tail(default_loop(), o);
  log("tail: " + std::to_string(t.returned) + " returns from " + std::to_string(t.attempts) + " section samples");
  if (c.format == "csv") {
    std::cout << tail_csv(t);
  } else {
    json j = to_json(t);
    j["loop"] = to_json(default_loop());
    j["provenance"] = to_json(provenance(c));
    emit(j);
  }
  return kOk;
}

// verify -----------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::size_t samples = 0;  // 0: suite default
  int max_length = 12;
  std::vector<double> T_grid{2, 5, 10, 100};
};

int cmd_verify(const VerifyArgs& a, const Common& c) {
  json report;
  bool pass = false;
  auto n = [&](std::size_t dflt) { return a.samples ? a.samples : dflt; };
  if (a.suite == "lemma2") {
    auto r = check_positivity(a.max_length);
    report = to_json(r);
    pass = r.pass;
  } else if (a.suite == "lemma3") {
    auto e = check_expansion(n(100000), c.seed, c.workers);
    auto d = check_distortion(n(100000), mix_seed(c.seed, 1), c.workers);
    report = json{{"suite", "lemma3"}, {"expansion", to_json(e)}, {"distortion", to_json(d)}, {"pass", e.pass && d.pass}};
    pass = e.pass && d.pass;
  } else if (a.suite == "kerckhoff") {
    auto r = check_kerckhoff(a.T_grid, n(1000000), c.seed, c.workers);
    report = to_json(r);
    pass = r.pass;
  } else if (a.suite == "roof-jacobian") {
    auto r = check_roof_jacobian(n(10000), c.seed, c.workers);
    report = to_json(r);
    pass = r.pass;
  } else if (a.suite == "partition") {
    auto r = check_partition();
    report = to_json(r);
    pass = r.pass;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown suite " + a.suite);
  }
  report["provenance"] = to_json(provenance(c));
  emit(report);
  if (!pass) log("suite " + a.suite + " FAILED");
  return pass ? kOk : kViolated;
}

int cmd_distortion(std::size_t pairs, long max_n, const Common& c) {
  auto r = check_distortion(pairs, c.seed, c.workers, max_n);
  json j = to_json(r);
  j["provenance"] = to_json(provenance(c));
  emit(j);
  return r.pass ? kOk : kViolated;
}

// render -----------------------------------------------------------------------

struct RenderArgs {
  std::size_t points = 1000000;
  std::size_t burn_in = 1000;
  std::string size = "1024x1024";
  std::string out;
  std::string points_out;
  std::string points_format = "csv";
};

std::pair<int, int> parse_size(const std::string& s) {
  auto x = s.find('x');
  if (x == std::string::npos) throw Error(ErrorCode::InvalidArgument, "size must look like WxH");
  try {
    std::size_t u1 = 0, u2 = 0;
    int w = std::stoi(s.substr(0, x), &u1), h = std::stoi(s.substr(x + 1), &u2);
    if (u1 != x || u2 != s.size() - x - 1) throw std::invalid_argument("trailing");
    if (w < 64 || h < 64) throw Error(ErrorCode::InvalidArgument, "raster must be at least 64x64");
    return {w, h};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "size must look like WxH");
  }
}

int cmd_render(const RenderArgs& a, const Common& c) {
  auto [w, h] = parse_size(a.size);
  ChaosGameOptions g;
  g.count = a.points;
  g.burn_in = a.burn_in;
  g.seed = c.seed;
  g.workers = c.workers;
  auto cloud = chaos_game_simplex(g);
  auto pixels = render_density(cloud, w, h);
  {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + a.out);
    // Only what determines the pixels, so equal images carry equal headers.
    Provenance prov = provenance(c);
    prov.flags = "render --points " + std::to_string(a.points) + " --burn-in " + std::to_string(a.burn_in) +
                 " --size " + std::to_string(w) + "x" + std::to_string(h);
    write_pgm(f, w, h, pixels, prov);
    if (!f) throw Error(ErrorCode::Io, "write failed for " + a.out);
  }
  if (!a.points_out.empty()) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(cloud.size());
    for (const auto& p : cloud) pts.push_back({p[0], p[1]});
    std::ofstream f(a.points_out, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + a.points_out);
    if (a.points_format == "bin") write_points_binary(f, pts);
    else write_points_csv(f, pts);
    if (!f) throw Error(ErrorCode::Io, "write failed for " + a.points_out);
  }
  std::size_t lit = 0;
  for (auto p : pixels) lit += p != 0;
  emit({{"out", a.out}, {"width", w}, {"height", h}, {"points", a.points}, {"lit_pixels", lit},
        {"provenance", to_json(provenance(c))}});
  return kOk;
}

// The worker count never changes results, so it is left out of provenance.
std::string joined_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--workers") {
      ++i;
      continue;
    }
    if (a.rfind("--workers=", 0) == 0) continue;
    for (char& ch : a)
      if (ch == '\n' || ch == '\r') ch = ' ';
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::BracketTooWide: return kBudget;
    case ErrorCode::Io: return kIo;
    default: return kBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rauzy induction, the Rauzy gasket map and its dimension estimates"};
  app.require_subcommand(1);
  Common common;
  common.flags = joined_args(argc, argv);
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  common.workers = hw;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "RNG seed (default: $RAUZY_SEED or 0)");
    sub->add_option("--workers", common.workers, "worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber);
  };

  StepArgs step;
  auto* s_step = app.add_subcommand("step", "run the Rauzy induction from lengths p/q p/q p/q");
  s_step->add_option("lengths", step.lengths, "three lengths as p/q")->expected(3)->required();
  s_step->add_flag("--accelerated", step.accelerated, "group consecutive wins of one letter");
  s_step->add_option("--iters", step.iters, "maximum iterations")->check(CLI::PositiveNumber);
  s_step->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> classify_lengths;
  long classify_iters = 1000;
  auto* s_classify = app.add_subcommand("classify", "does the induction survive max-iters accelerated steps");
  s_classify->add_option("lengths", classify_lengths, "three lengths as p/q")->expected(3)->required();
  s_classify->add_option("--max-iters", classify_iters)->check(CLI::PositiveNumber);
  s_classify->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));

  auto* s_graph = app.add_subcommand("graph", "Rauzy graph export");
  s_graph->add_option("--format", common.format)->check(CLI::IsMember({"json", "dot", "text"}));

  int cyl_depth = 1;
  long cyl_ncap = 64;
  std::string cyl_floor = "0";
  auto* s_cyl = app.add_subcommand("cylinders", "exact cylinder enumeration as JSON lines");
  s_cyl->add_option("--depth", cyl_depth)->check(CLI::PositiveNumber);
  s_cyl->add_option("--ncap", cyl_ncap)->check(CLI::PositiveNumber);
  s_cyl->add_option("--floor", cyl_floor, "measure floor as p/q");
  std::string cyl_format = "jsonl";
  s_cyl->add_option("--format", cyl_format)->check(CLI::IsMember({"jsonl", "csv"}));

  DimensionConfig dim;
  auto* s_dim = app.add_subcommand("dimension", "survivor decay, fast decay and box counting");
  s_dim->add_option("--depth", dim.depth, "survivor depth; delta needs at least 3")->check(CLI::Range(1, 64));
  s_dim->add_option("--ncap", dim.ncap)->check(CLI::PositiveNumber);
  s_dim->add_option("--floor", dim.measure_floor)->check(CLI::NonNegativeNumber);
  s_dim->add_option("--alpha-depth", dim.alpha_depth)->check(CLI::PositiveNumber);
  s_dim->add_option("--alpha-ncap", dim.alpha_ncap)->check(CLI::PositiveNumber);
  s_dim->add_option("--points", dim.points)->check(CLI::PositiveNumber);
  s_dim->add_option("--burn-in", dim.burn_in);
  s_dim->add_option("--eps", dim.eps_grid, "eps grid for the fast-decay fit");
  s_dim->add_option("--box-sizes", dim.box_sizes, "dyadic box sizes");
  add_seed(s_dim);
  s_dim->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));

  TailOptions tail;
  auto* s_tail = app.add_subcommand("tail", "first-return roof tail and its power-law fit");
  s_tail->add_option("--returns", tail.returns)->check(CLI::PositiveNumber);
  s_tail->add_option("--T", tail.T_grid, "thresholds");
  s_tail->add_option("--depth-cap", tail.depth_cap)->check(CLI::PositiveNumber);
  s_tail->add_option("--max-attempts", tail.max_attempts)->check(CLI::PositiveNumber);
  add_seed(s_tail);
  s_tail->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));

  VerifyArgs verify;
  auto* s_verify = app.add_subcommand("verify", "run an invariant suite");
  s_verify->add_option("--suite", verify.suite)
      ->required()
      ->check(CLI::IsMember({"lemma2", "lemma3", "kerckhoff", "roof-jacobian", "partition"}));
  s_verify->add_option("--samples", verify.samples)->check(CLI::PositiveNumber);
  s_verify->add_option("--max-length", verify.max_length)->check(CLI::Range(1, 16));
  s_verify->add_option("--T", verify.T_grid)->check(CLI::PositiveNumber);
  add_seed(s_verify);

  RenderArgs render;
  auto* s_render = app.add_subcommand("render", "chaos-game raster of the gasket (binary PGM)");
  s_render->add_option("--points", render.points)->check(CLI::PositiveNumber);
  s_render->add_option("--burn-in", render.burn_in);
  s_render->add_option("--size", render.size, "WxH, at least 64x64");
  s_render->add_option("--out", render.out)->required();
  s_render->add_option("--points-out", render.points_out, "also write the (l1, l2) cloud");
  s_render->add_option("--points-format", render.points_format)->check(CLI::IsMember({"csv", "bin"}));
  add_seed(s_render);

  std::size_t dist_pairs = 100000;
  long dist_max_n = 100;
  auto* s_dist = app.add_subcommand("distortion", "Jacobian distortion on random same-cell pairs");
  s_dist->add_option("--pairs", dist_pairs)->check(CLI::PositiveNumber);
  s_dist->add_option("--max-n", dist_max_n)->check(CLI::PositiveNumber);
  add_seed(s_dist);

  try {
    common.seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  } catch (const Error& e) {
    log(e.what());
    return exit_code(e.code());
  }

  try {
    if (*s_step) return cmd_step(step, common);
    if (*s_classify) return cmd_classify(classify_lengths, classify_iters, common);
    if (*s_graph) return cmd_graph(common);
    if (*s_cyl) {
      common.format = cyl_format == "csv" ? "csv" : "jsonl";
      return cmd_cylinders(cyl_depth, cyl_ncap, cyl_floor, common);
    }
    if (*s_dim) return cmd_dimension(dim, common);
    if (*s_tail) return cmd_tail(tail, common);
    if (*s_verify) return cmd_verify(verify, common);
    if (*s_render) return cmd_render(render, common);
    if (*s_dist) return cmd_distortion(dist_pairs, dist_max_n, common);
  } catch (const Error& e) {
    log(e.what());
    if (e.code() == ErrorCode::BracketTooWide) log("raise --ncap or lower --floor, or reduce --depth");
    return exit_code(e.code());
  } catch (const std::bad_alloc&) {
    log("out of memory; reduce the budgets");
    return kBudget;
  } catch (const std::exception& e) {
    log(e.what());
    return kBadInput;
  }
  return kBadInput;
}
