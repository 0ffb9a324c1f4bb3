#include <cmath>
#include <random>

#include "doctest.h"
#include "rauzy/error.hpp"
#include "rauzy/measure.hpp"
#include "rauzy/random.hpp"
#include "test_support.hpp"

using namespace rauzy;

namespace {

RauzyPath path_of(std::initializer_list<std::pair<Branch, long>> blocks, Perm3 start = Perm3::identity()) {
  RauzyPath p{start, {}};
  for (auto [b, n] : blocks) p.append(PathEdge::make(p.end(), b, n));
  return p;
}

Rational twice_area(const std::array<ChartPoint, 3>& v) {
  Rational t = (v[1].exact->a - v[0].exact->a) * (v[2].exact->b - v[0].exact->b) -
               (v[2].exact->a - v[0].exact->a) * (v[1].exact->b - v[0].exact->b);
  return t.sign() < 0 ? -t : t;
}

// Chart area of a triangle relative to the chart triangle (area 1/12).
Rational relative_area(const std::array<ChartPoint, 3>& v) { return twice_area(v) * Rational(6); }

std::array<ChartPoint, 3> pull_back(const std::vector<MarkovCell>& prefix, std::array<ChartPoint, 3> v) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    for (auto& p : v) p = inverse_branch(*it, p);
  return v;
}

}  // namespace

TEST_CASE("path_probability") {
  WeightVector ones{1, 1, 1};
  CHECK(path_probability(ones, RauzyPath{Perm3::identity(), {}}) == Rational(1));
  CHECK(path_probability({Rational(2), Rational(7, 3), Rational(5)}, RauzyPath{Perm3::identity(), {}}) == Rational(1));
  RauzyPath one = path_of({{Branch::Swap, 1}});
  CHECK(path_probability(ones, one) == Rational(1, 4));
  CHECK(path_probability({1, 2, 3}, one) == Rational(1, 2));
  CHECK_THROWS_AS(path_probability({1, 0, 3}, one), Error);

  // Rejection sampling of the cone lambda_1 > lambda_2 + lambda_3.
  std::mt19937_64 rng(1);
  int hits = 0, total = 200000;
  for (int i = 0; i < total; ++i) {
    auto l = sample_nu(rng, {1, 1, 1});
    if (l[0] > l[1] + l[2]) ++hits;
  }
  CHECK(std::abs(hits / double(total) - 0.25) < 0.01);

  // Conditional multiplicativity: P_q(g1 g2) = P_q(g1) P_{B_g1 q}(g2).
  std::mt19937_64 r2(2);
  std::uniform_int_distribution<int> br(0, 2), len(0, 4), cnt(1, 5), qd(1, 9);
  for (int t = 0; t < 300; ++t) {
    RauzyPath g1{Perm3::unrank(t % 6), {}};
    for (int i = len(r2); i > 0; --i) g1.append(PathEdge::make(g1.end(), static_cast<Branch>(br(r2)), cnt(r2)));
    RauzyPath g2{g1.end(), {}};
    for (int i = len(r2); i > 0; --i) g2.append(PathEdge::make(g2.end(), static_cast<Branch>(br(r2)), cnt(r2)));
    WeightVector q{Rational(qd(r2), qd(r2)), Rational(qd(r2), qd(r2)), Rational(qd(r2), qd(r2))};
    CocycleMatrix b = cocycle_of(g1);
    WeightVector bq;
    for (int r = 0; r < 3; ++r) {
      Rational acc(0);
      for (int c = 0; c < 3; ++c) acc += Rational(b(r, c)) * q[static_cast<std::size_t>(c)];
      bq[static_cast<std::size_t>(r)] = acc;
    }
    CHECK(path_probability(q, g1 + g2) == path_probability(q, g1) * path_probability(bq, g2));
  }
}

TEST_CASE("cylinder masses at depth one") {
  CHECK(cylinder_measure(RauzyPath{Perm3::identity(), {}}) == Rational(1));
  CHECK(hole_measure(RauzyPath{Perm3::identity(), {}}) == Rational(1, 4));
  CHECK(cylinder_measure(path_of({{Branch::Swap, 1}})) == Rational(1, 5));
  CHECK(cylinder_measure(path_of({{Branch::Cycle, 1}})) == Rational(3, 20));
  CHECK(hole_measure(path_of({{Branch::Keep, 1}})) == Rational(1, 15));
  // At least k wins: {a > k/(k+1)}, relative area 3/(k+1)^2.
  for (long k = 1; k < 30; ++k)
    CHECK(at_least_wins_measure(RauzyPath{Perm3::identity(), {}}, k) == Rational(3, (k + 1) * (k + 1)));
  CHECK_THROWS_AS(at_least_wins_measure(RauzyPath{Perm3::identity(), {}}, 0), Error);

  // Against polygon areas of the cells.
  for (long n = 1; n <= 40; ++n) {
    for (Branch b : {Branch::Swap, Branch::Cycle}) {
      Rational area = relative_area(cell_vertices(MarkovCell{n, b}));
      CHECK(cylinder_measure(path_of({{b, n}})) == area);
    }
    CHECK(hole_measure(path_of({{Branch::Keep, n}})) == relative_area(cell_vertices(MarkovCell{n, Branch::Keep})));
  }

  // Partition of unity, truncated at N with the exact tail.
  for (long N : {1L, 5L, 64L}) {
    Rational total = hole_measure(RauzyPath{Perm3::identity(), {}});
    for (long n = 1; n <= N; ++n) {
      total += cylinder_measure(path_of({{Branch::Swap, n}}));
      total += cylinder_measure(path_of({{Branch::Cycle, n}}));
      total += hole_measure(path_of({{Branch::Keep, n}}));
    }
    total += at_least_wins_measure(RauzyPath{Perm3::identity(), {}}, N + 1);
    CHECK(total == Rational(1));
  }
  CHECK(Rational(1) - hole_measure(RauzyPath{Perm3::identity(), {}}) == Rational(3, 4));

  // Monte Carlo cross-check of the surviving mass 3/4 inside the ordered simplex.
  std::mt19937_64 rng(4);
  int in = 0, total = 0;
  while (total < 200000) {
    auto l = sample_nu(rng, {1, 1, 1});
    if (!(l[0] > l[1] && l[1] > l[2])) continue;
    ++total;
    if (l[0] > 0.5) ++in;
  }
  CHECK(std::abs(in / double(total) - 0.75) < 0.005);
}

TEST_CASE("cylinder masses deeper down") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> br(1, 2);
  std::uniform_int_distribution<long> cnt(1, 6);
  for (int t = 0; t < 200; ++t) {
    std::vector<MarkovCell> cells;
    RauzyPath path{Perm3::identity(), {}};
    Rational previous(1);
    for (int d = 0; d < 4; ++d) {
      MarkovCell c{cnt(rng), static_cast<Branch>(br(rng))};
      cells.push_back(c);
      path.append(PathEdge::make(path.end(), c.branch, c.n));
      Rational m = cylinder_measure(path);
      CHECK(m < previous);
      previous = m;
    }
    // The cylinder is the pull-back of the whole chart along its cells.
    std::array<ChartPoint, 3> chart{ChartPoint{1, 0, ExactChartPoint{1, 0}},
                                    ChartPoint{0.5, 0.5, ExactChartPoint{Rational(1, 2), Rational(1, 2)}},
                                    ChartPoint{1.0 / 3, 1.0 / 3, ExactChartPoint{Rational(1, 3), Rational(1, 3)}}};
    CHECK(relative_area(pull_back(cells, chart)) == previous);
  }
  // Depth two from a single parent: children plus tail plus hole give the parent.
  RauzyPath parent = path_of({{Branch::Cycle, 2}});
  Rational sum = hole_measure(parent);
  for (long n = 1; n <= 20; ++n) {
    for (Branch b : {Branch::Swap, Branch::Cycle}) sum += cylinder_measure(parent + path_of({{b, n}}, parent.end()));
    sum += hole_measure(parent + path_of({{Branch::Keep, n}}, parent.end()));
  }
  sum += at_least_wins_measure(parent, 21);
  CHECK(sum == cylinder_measure(parent));
}

TEST_CASE("roof") {
  LengthVector l{{Rational(7, 10), Rational(9, 50), Rational(3, 25)}};
  RauzyPath step = path_of({{Branch::Cycle, 2}});
  CHECK(roof(l, step) == doctest::Approx(-std::log(0.4)).epsilon(1e-14));
  CHECK(roof(l, step) == doctest::Approx(0.916290731874155));
  CHECK(roof(l, RauzyPath{Perm3::identity(), {}}) == 0.0);
  CHECK_THROWS_AS(roof(l, path_of({{Branch::Swap, 2}})), Error);
  CHECK_THROWS_AS(roof(l, path_of({{Branch::Cycle, 1}})), Error);
  CHECK_THROWS_AS(roof(LengthVector{{Rational(1, 5), Rational(1, 2), Rational(3, 10)}}, step), Error);
  CHECK(roof(ChartPoint::make(0.7, 0.18)) == doctest::Approx(-std::log(0.4)));
  CHECK_THROWS_AS(roof(ChartPoint::make(0.45, 0.3)), Error);

  // e^{3 r} = |DT| on single accelerated steps, with the exact roof.
  std::mt19937_64 rng(8);
  int checked = 0;
  while (checked < 2000) {
    SpecialSystem s = rauzy::testing::random_nonhole_system(rng);
    auto acc = accelerated_step(s);
    auto* c = std::get_if<AcceleratedContinue>(&acc);
    if (!c) continue;
    RauzyPath p{s.order(), {PathEdge::make(s.order(), c->branch, c->n)}};
    double r = roof(s.lengths(), p);
    double j = jacobian(ChartPoint::make_exact(s.sorted(0), s.sorted(1)));
    CHECK(std::abs(std::exp(3 * r) / j - 1) < 1e-9);
    ++checked;
  }
}

TEST_CASE("Kerckhoff frequencies") {
  // For q = (1,1,1) the event is "at least k wins" with k the least integer
  // above T - 1, of mass 3/(k+1)^2.
  for (double T : {2.0, 5.0, 10.0, 100.0}) {
    auto r = mc_kerckhoff(T, {1, 1, 1}, 200000, 7);
    double k = std::floor(T - 1) + 1;
    double exact = 3 / ((k + 1) * (k + 1));
    double sd = std::sqrt(exact * (1 - exact) / 200000);
    CHECK(r.pass);
    CHECK(std::abs(r.frequency - exact) < 4 * sd + 1e-12);
  }
  auto a = mc_kerckhoff(3, {1, 2, 3}, 50000, 11, 1);
  auto b = mc_kerckhoff(3, {1, 2, 3}, 50000, 11, 3);
  CHECK(a.hits == b.hits);
  CHECK(a.pass);
  CHECK(mc_kerckhoff(1.0000001, {1, 1, 1}, 1000, 1).frequency <= 1.0);
  CHECK_THROWS_AS(mc_kerckhoff(1, {1, 1, 1}, 1000, 1), Error);
}

TEST_CASE("balance") {
  std::vector<double> grid{1.01, 2, 5, 10, 100, 1000, 10000};
  auto r = mc_balance(grid, 40000, 3);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(r.probability[i] >= r.probability[i - 1]);
  CHECK(r.probability[0] < 0.01);
  bool witnessed = false;
  for (std::size_t i = 0; i < grid.size(); ++i) witnessed = witnessed || r.probability[i] > 1 / grid[i];
  CHECK(witnessed);
  auto again = mc_balance(grid, 40000, 3, {1, 1, 1}, 4);
  CHECK(again.probability == r.probability);
  CHECK(again.holes == r.holes);
  CHECK_THROWS_AS(mc_balance({0.5}, 10, 1), Error);
}

TEST_CASE("first return") {
  RauzyPath loop = default_loop();
  CHECK(is_complete(loop));
  CHECK(is_positive(loop));
  CHECK(loop.end() == loop.start);
  std::vector<MarkovCell> star(3, MarkovCell{1, Branch::Cycle});

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 200; ++t) {
    // x in the chart, pulled back twice along the loop: a member of the double cylinder.
    double s = u(rng), v = u(rng) * (1 - s);
    double l[3] = {1, 1 + s, 1 + s + v};
    double tot = l[0] + l[1] + l[2];
    ChartPoint x{l[2] / tot, l[1] / tot, std::nullopt};
    ChartPoint once = x;
    for (int k = 2; k >= 0; --k) once = inverse_branch(star[static_cast<std::size_t>(k)], once);
    ChartPoint p = once;
    for (int k = 2; k >= 0; --k) p = inverse_branch(star[static_cast<std::size_t>(k)], p);
    auto out = first_return(p, loop);
    REQUIRE(std::holds_alternative<ReturnRecord>(out));
    const auto& rec = std::get<ReturnRecord>(out);
    CHECK(rec.path == loop);
    CHECK(std::abs(rec.return_point.a - once.a) < 1e-10);
    CHECK(std::abs(rec.return_point.b - once.b) < 1e-10);
    double direct = 0;
    ChartPoint cur = p;
    for (int k = 0; k < 3; ++k) {
      direct += roof(cur);
      cur = std::get<MapImage>(apply_T(cur)).point;
    }
    CHECK(rec.roof_value == doctest::Approx(direct).epsilon(1e-12));
    CHECK(rec.roof_value > 0);
  }

  // Longer returns: forward iteration reproduces the return point and the roof.
  int longer = 0;
  for (int t = 0; t < 20000 && longer < 50; ++t) {
    ChartPoint p = sample_section(rng, loop);
    ReturnOutcome out;
    try {
      out = first_return(p, loop);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Hole);
      continue;
    }
    REQUIRE(std::holds_alternative<ReturnRecord>(out));
    const auto& rec = std::get<ReturnRecord>(out);
    CHECK(rec.path.start == loop.start);
    CHECK(rec.path.end() == loop.start);
    CHECK(rec.path.edges.size() >= 3);
    ChartPoint cur = p;
    double total = 0, worst_step = 0;
    for (const auto& e : rec.path.edges) {
      auto im = std::get<MapImage>(apply_T(cur));
      CHECK(im.cell == MarkovCell{e.n, e.branch});
      total += -std::log(im.denominator);
      worst_step = std::max(worst_step, -std::log(im.denominator));
      cur = im.point;
    }
    CHECK(std::abs(cur.a - rec.return_point.a) < 1e-10);
    CHECK(rec.roof_value == doctest::Approx(total));
    CHECK(rec.roof_value >= worst_step);
    if (rec.path.edges.size() > 3) ++longer;
  }
  CHECK(longer > 0);

  // Loop followed by a Swap block cannot return at step 3.
  ChartPoint x = ChartPoint::make(0.6, 0.3);
  ChartPoint p = inverse_branch(MarkovCell{1, Branch::Swap}, x);
  for (int k = 2; k >= 0; --k) p = inverse_branch(star[static_cast<std::size_t>(k)], p);
  auto capped = first_return(p, loop, 3);
  REQUIRE(std::holds_alternative<NoReturn>(capped));
  CHECK(std::get<NoReturn>(capped).roof_so_far > 0);

  ChartPoint doomed = ChartPoint::make(0.45, 0.3);
  for (int k = 2; k >= 0; --k) doomed = inverse_branch(star[static_cast<std::size_t>(k)], doomed);
  CHECK_THROWS_AS(first_return(doomed, loop), Error);
  try {
    first_return(doomed, loop);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Hole);
  }
  try {
    first_return(ChartPoint::make(0.6, 0.3), loop);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutsideCylinder);
  }
  CHECK_THROWS_AS(first_return(x, path_of({{Branch::Cycle, 1}})), Error);
}

TEST_CASE("roof tail") {
  TailOptions o;
  o.returns = 3000;
  o.seed = 5;
  o.T_grid.clear();
  for (double T = 2; T <= 1e4; T *= 2) o.T_grid.push_back(T);
  TailCurve c = roof_tail(default_loop(), o);
  CHECK(c.returned == 3000);
  CHECK(c.attempts == c.returned + c.holes + c.no_return + c.ties);
  for (std::size_t i = 1; i < c.probabilities.size(); ++i) CHECK(c.probabilities[i] <= c.probabilities[i - 1]);
  for (double p : c.probabilities) CHECK((p >= 0 && p <= 1));
  CHECK(c.fit_points >= 2);
  CHECK(c.fitted_exponent > 0);
  o.workers = 3;
  TailCurve d = roof_tail(default_loop(), o);
  CHECK(d.attempts == c.attempts);
  CHECK(d.exceed_counts == c.exceed_counts);
  CHECK(d.fitted_exponent == c.fitted_exponent);
  o.T_grid = {4, 2};
  CHECK_THROWS_AS(roof_tail(default_loop(), o), Error);
  CHECK(TailOptions{}.T_grid == default_tail_grid());
  CHECK(default_tail_grid().back() == doctest::Approx(1e6));
}

TEST_CASE("line fit") {
  LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.residual == doctest::Approx(0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_line({1, 1}, {0, 1}), Error);
}
