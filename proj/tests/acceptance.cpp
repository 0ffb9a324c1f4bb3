// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rauzy/checks.hpp"
#include "rauzy/dimension.hpp"
#include "rauzy/io.hpp"
#include "rauzy/markov_map.hpp"
#include "rauzy/measure.hpp"
#include "rauzy/random.hpp"

using namespace rauzy;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Outcome lemma2() {
  PositivityCheck c = check_positivity(12);
  bool ok = c.pass && c.seconds < 60;
  return {ok, fmt("%llu complete paths up to length 12, %llu not positive, %.1f s",
                  static_cast<unsigned long long>(c.report.complete),
                  static_cast<unsigned long long>(c.report.complete_not_positive), c.seconds)};
}

Outcome lemma3() {
  ExpansionCheck e = check_expansion(100000, kSeed, 8);
  DistortionCheck d = check_distortion(100000, mix_seed(kSeed, 1), 8);
  return {e.pass && d.pass,
          fmt("expansion: %zu exceptions in %zu points (min ratios %.4f, %.6f); distortion: %zu exceptions in %zu "
              "pairs, worst %.3f <= 36",
              e.exceptions, e.samples, e.min_lower_ratio, e.min_upper_ratio, d.exceptions, d.pairs, d.worst_ratio)};
}

Outcome roof_jacobian() {
  RoofJacobianCheck r = check_roof_jacobian(10000, kSeed, 8);
  return {r.pass, fmt("%zu steps, worst relative error %.3g", r.steps, r.worst_relative_error)};
}

Outcome kerckhoff() {
  KerckhoffCheck k = check_kerckhoff({2, 5, 10, 100}, 1000000, kSeed, 8);
  std::string d;
  for (const auto& r : k.results) d += fmt("T=%g freq %.5f bound %.5f; ", r.T, r.frequency, r.bound + 3 * r.sigma);
  return {k.pass, d};
}

Outcome partition() {
  PartitionCheck p = check_partition();
  return {p.pass, fmt("depth 1 total %s, depth 2 total %s, depth-1 bracket [%.15f, %.15f]",
                      rational_text(p.levels[0].total).c_str(), rational_text(p.levels[1].total).c_str(),
                      p.depth1.lower.to_double(), p.depth1.upper.to_double())};
}

Outcome tail() {
  TailOptions o;
  o.returns = 100000;
  o.seed = kSeed;
  o.workers = 8;
  TailCurve t = roof_tail(default_loop(), o);
  bool ok = t.returned == 100000 && t.fitted_exponent > 0 && t.fit_residual < 0.1;
  return {ok, fmt("delta %.4f, residual %.4f over %zu thresholds, %zu returns from %zu samples", t.fitted_exponent,
                  t.fit_residual, t.fit_points, t.returned, t.attempts)};
}

Outcome dimension() {
  auto start = Clock::now();
  DimensionConfig cfg;
  cfg.seed = kSeed;
  cfg.workers = 8;
  DimensionReport r = run_dimension(cfg);
  double secs = since(start);
  bool ok = r.delta.delta > 0 && r.alpha1.alpha1 > 0 && r.ad_bound < 2 && r.box.dimension >= 1.55 &&
            r.box.dimension <= 1.95 && secs < 900;
  return {ok, fmt("delta %.4f, alpha1 %.4f, bound %.4f, box %.4f on %zu points, %.0f s", r.delta.delta,
                  r.alpha1.alpha1, r.ad_bound, r.box.dimension, cfg.points, secs)};
}

Outcome calibration() {
  std::vector<double> sizes;
  for (int k = 3; k <= 8; ++k) sizes.push_back(std::ldexp(1.0, -k));
  std::vector<std::array<double, 2>> tri, seg;
  auto rng = block_rng(kSeed, 0);
  while (tri.size() < 1000000) {
    double x = uniform01(rng), y = uniform01(rng);
    if (y <= x) tri.push_back({x, y});
  }
  for (int i = 0; i < 1000000; ++i) {
    double t = uniform01(rng);
    seg.push_back({t, 0.25 + 0.5 * t});
  }
  double dt = box_counting(tri, sizes).dimension, ds = box_counting(seg, sizes).dimension;
  return {std::abs(dt - 2) <= 0.05 && std::abs(ds - 1) <= 0.05, fmt("triangle %.4f, segment %.4f", dt, ds)};
}

Outcome determinism() {
  std::vector<std::string> bad;
  auto same = [&](const std::string& what, const std::function<std::string(unsigned)>& run) {
    if (run(1) != run(8)) bad.push_back(what);
  };
  same("chaos game", [](unsigned w) {
    ChaosGameOptions g;
    g.count = 100000;
    g.seed = kSeed;
    g.workers = w;
    auto pts = chaos_game_simplex(g);
    return std::string(reinterpret_cast<const char*>(pts.data()), pts.size() * sizeof pts[0]);
  });
  same("render", [](unsigned w) {
    ChaosGameOptions g;
    g.count = 100000;
    g.seed = kSeed;
    g.workers = w;
    auto px = render_density(chaos_game_simplex(g), 256, 256);
    return std::string(px.begin(), px.end());
  });
  same("kerckhoff", [](unsigned w) { return to_json(check_kerckhoff({2, 10}, 100000, kSeed, w)).dump(); });
  same("balance", [](unsigned w) {
    BalanceReport b = mc_balance({10, 100}, 20000, kSeed, {1, 1, 1}, w);
    return json(b.probability).dump() + std::to_string(b.holes);
  });
  same("tail", [](unsigned w) {
    TailOptions o;
    o.returns = 2000;
    o.seed = kSeed;
    o.workers = w;
    return to_json(roof_tail(default_loop(), o)).dump();
  });
  same("lemma3", [](unsigned w) {
    return to_json(check_expansion(20000, kSeed, w)).dump() + to_json(check_distortion(20000, kSeed, w)).dump();
  });
  same("roof-jacobian", [](unsigned w) { return to_json(check_roof_jacobian(5000, kSeed, w)).dump(); });
  same("survivor brackets", [](unsigned w) {
    SurvivorOptions o;
    o.ncap = 32;
    o.measure_floor = 1e-9;
    o.workers = w;
    std::string s;
    for (const auto& b : survivor_masses(5, o)) s += rational_text(b.lower) + rational_text(b.upper);
    return s;
  });
  std::string d = bad.empty() ? "chaos game, render, kerckhoff, balance, tail, lemma3, roof-jacobian, survivor "
                                "brackets identical at 1 and 8 workers"
                              : "differs: ";
  for (const auto& b : bad) d += b + " ";
  return {bad.empty(), d};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "complete paths are positive", lemma2},
      {2, "expansion and distortion constants", lemma3},
      {3, "roof and Jacobian", roof_jacobian},
      {4, "Kerckhoff frequencies", kerckhoff},
      {5, "exact partition of unity", partition},
      {6, "exponential roof tail", tail},
      {7, "dimension pipeline", dimension},
      {8, "box-counting calibration", calibration},
      {9, "determinism across workers", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), since(start));
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
