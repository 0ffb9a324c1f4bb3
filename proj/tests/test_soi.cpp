#include <random>

#include "doctest.h"
#include "rauzy/error.hpp"
#include "rauzy/soi.hpp"
#include "test_support.hpp"

using namespace rauzy;
using rauzy::testing::random_nonhole_system;
using rauzy::testing::random_system;
using rauzy::testing::sorted_lengths;
using rauzy::testing::times;

namespace {

Rational R(const char* s) { return Rational::parse(s); }

SpecialSystem sys(const char* a, const char* b, const char* c) { return SpecialSystem::make(R(a), R(b), R(c)); }

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
  CHECK(R("6/8") == Rational(3, 4));
  CHECK(R("-3/9").str() == "-1/3");
  CHECK(R("5").str() == "5/1");
  CHECK(error_of([] { R("0.5"); }) == ErrorCode::InvalidArgument);
  CHECK(error_of([] { R("1/0"); }) == ErrorCode::InvalidArgument);
  CHECK(error_of([] { R("1/-2"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("make_system") {
  SpecialSystem s = sys("3/5", "1/4", "3/20");
  CHECK(s.order() == Perm3::from_labels(1, 2, 3));

  SpecialSystem t = sys("1/4", "3/5", "3/20");
  CHECK(t.order() == Perm3::from_labels(2, 1, 3));
  CHECK(t.length(Letter::from_label(1)) == R("1/4"));

  CHECK(error_of([] { sys("1/3", "1/3", "1/3"); }) == ErrorCode::TieEncountered);
  CHECK(error_of([] { sys("1/2", "1/4", "1/8"); }) == ErrorCode::NotNormalized);
  CHECK(error_of([] { sys("3/2", "-1/4", "-1/4"); }) == ErrorCode::NonPositive);
}

TEST_CASE("transmission and reduction on the right") {
  auto s = IntervalPairSystem::from_special(sys("3/5", "1/4", "3/20"));
  auto t = transmission_right(s);
  CHECK(t.pairs[0] == s.pairs[0]);
  CHECK(t.pairs[1].right == Interval{R("7/20"), R("3/5")});
  CHECK(t.pairs[2].right == Interval{R("9/20"), R("3/5")});
  CHECK(t.support == s.support);
  t.validate();

  auto r = reduction_right(t);
  REQUIRE(std::holds_alternative<IntervalPairSystem>(r));
  const auto& red = std::get<IntervalPairSystem>(r);
  CHECK(red.support == Interval{R("0"), R("3/5")});
  CHECK(red.pairs[0] == IsometryPair{{R("0"), R("1/5")}, {R("2/5"), R("3/5")}});
  red.validate();

  auto hole = transmission_right(IntervalPairSystem::from_special(sys("2/5", "7/20", "1/4")));
  CHECK(std::holds_alternative<HoleOutcome>(reduction_right(hole)));

  // Support end not covered at all.
  IntervalPairSystem gap = s;
  gap.support.hi = R("2");
  CHECK(std::holds_alternative<HoleOutcome>(reduction_right(gap)));

  // Untransmitted special system: right bases are not all inside the largest.
  IntervalPairSystem bad = s;
  bad.pairs[1].right = {R("0"), R("1/4")};
  CHECK(error_of([&] { transmission_right(bad); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("rauzy_step examples") {
  auto out = rauzy_step(sys("3/5", "1/4", "3/20"));
  REQUIRE(std::holds_alternative<StepContinue>(out));
  const auto& c = std::get<StepContinue>(out);
  CHECK(c.winner == Letter::from_label(1));
  CHECK(c.system.lengths() == LengthVector{{R("1/3"), R("5/12"), R("1/4")}});
  CHECK(c.branch == Branch::Swap);
  CHECK(relative_order(c.branch) == std::array<int, 3>{2, 1, 3});
  CHECK(c.length_matrix == IntMatrix{{1, 1, 1, 1, 0, 0, 0, 0, 1}});

  CHECK(std::holds_alternative<HoleOutcome>(rauzy_step(sys("2/5", "7/20", "1/4"))));
  CHECK(std::holds_alternative<TieOutcome>(rauzy_step(sys("1/2", "3/10", "1/5"))));
}

TEST_CASE("accelerated_step examples") {
  auto out = accelerated_step(sys("7/10", "9/50", "3/25"));
  REQUIRE(std::holds_alternative<AcceleratedContinue>(out));
  const auto& c = std::get<AcceleratedContinue>(out);
  CHECK(c.n == 2);
  CHECK(c.system.lengths() == LengthVector{{R("1/4"), R("9/20"), R("3/10")}});
  CHECK(c.branch == Branch::Cycle);
  CHECK(relative_order(c.branch) == std::array<int, 3>{2, 3, 1});
  CHECK(c.length_matrix == accelerated_matrix(Branch::Cycle, 2));

  auto one = accelerated_step(sys("3/5", "1/4", "3/20"));
  auto single = rauzy_step(sys("3/5", "1/4", "3/20"));
  REQUIRE(std::holds_alternative<AcceleratedContinue>(one));
  CHECK(std::get<AcceleratedContinue>(one).n == 1);
  CHECK(std::get<AcceleratedContinue>(one).system == std::get<StepContinue>(single).system);

  auto hole = accelerated_step(sys("2/5", "7/20", "1/4"));
  REQUIRE(std::holds_alternative<HoleAfter>(hole));
  CHECK(std::get<HoleAfter>(hole).k == 0);

  // 13/20 -> 3/10 stays largest but below 1/5 + 3/20: hole after one win.
  auto late = accelerated_step(sys("13/20", "1/5", "3/20"));
  REQUIRE(std::holds_alternative<HoleAfter>(late));
  CHECK(std::get<HoleAfter>(late).k == 1);
}

TEST_CASE("accelerated matrix shapes match the closed forms") {
  CHECK(accelerated_matrix(Branch::Swap, 3) == IntMatrix{{3, 1, 3, 1, 0, 0, 0, 0, 1}});
  CHECK(accelerated_matrix(Branch::Cycle, 3) == IntMatrix{{3, 3, 1, 1, 0, 0, 0, 1, 0}});
  for (long n = 1; n < 20; ++n) {
    for (Branch b : {Branch::Swap, Branch::Cycle}) {
      IntMatrix prod = IntMatrix::identity();
      for (long i = 1; i < n; ++i) prod = prod * step_matrix(Branch::Keep);
      prod = prod * step_matrix(b);
      CHECK(prod == accelerated_matrix(b, n));
    }
  }
}

TEST_CASE("step invariants on random rational systems") {
  std::mt19937_64 rng(20240611);
  int continued = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SpecialSystem s = random_system(rng);
    auto out = rauzy_step(s);

    // Hole iff largest < sum of others iff largest < 1/2.
    bool hole = std::holds_alternative<HoleOutcome>(out);
    CHECK(hole == (s.sorted(0) < s.sorted(1) + s.sorted(2)));
    CHECK(hole == (s.sorted(0) < Rational(1, 2)));
    if (!std::holds_alternative<StepContinue>(out)) continue;
    const auto& c = std::get<StepContinue>(out);
    ++continued;

    CHECK(c.system.lengths().sum() == Rational(1));
    CHECK(std::abs(c.length_matrix.det()) == 1);
    Vec3<Rational> unnormalized = sorted_lengths(c.system);
    for (auto& v : unnormalized) v *= c.scale;
    CHECK(times(c.length_matrix, unnormalized) == sorted_lengths(s));

    // Same step through the interval-pair machinery, then rescaled.
    auto red = reduction_right(transmission_right(IntervalPairSystem::from_special(s)));
    REQUIRE(std::holds_alternative<IntervalPairSystem>(red));
    auto lengths = std::get<IntervalPairSystem>(red).special_lengths();
    REQUIRE(lengths.has_value());
    CHECK(*lengths == c.system.lengths());
  }
  CHECK(continued > 300);
}

TEST_CASE("accelerated composite equals product of elementary steps") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    SpecialSystem s = random_nonhole_system(rng);
    auto acc = accelerated_step(s);
    if (!std::holds_alternative<AcceleratedContinue>(acc)) continue;
    const auto& a = std::get<AcceleratedContinue>(acc);

    IntMatrix prod = IntMatrix::identity();
    SpecialSystem cur = s;
    for (long i = 0; i < a.n; ++i) {
      auto step = std::get<StepContinue>(rauzy_step(cur));
      prod = prod * step.length_matrix;
      cur = step.system;
    }
    CHECK(prod == a.length_matrix);
    CHECK(cur == a.system);
    CHECK(std::abs(a.length_matrix.det()) == 1);
    Vec3<Rational> unnormalized = sorted_lengths(a.system);
    for (auto& v : unnormalized) v *= a.scale;
    CHECK(times(a.length_matrix, unnormalized) == sorted_lengths(s));
  }
}

namespace {

// Elementary iteration counting changes of winner; independent of accelerated_step.
ThinVerdict brute_force_classify(SpecialSystem s, long max_iters) {
  long generalized = 1;
  std::optional<Letter> winner;
  for (;;) {
    auto out = rauzy_step(s);
    if (std::holds_alternative<HoleOutcome>(out)) return HoleAt{generalized};
    if (std::holds_alternative<TieOutcome>(out)) return TieAt{generalized};
    const auto& c = std::get<StepContinue>(out);
    s = c.system;
    if (c.branch != Branch::Keep) {
      if (generalized == max_iters) return Survived{max_iters};
      ++generalized;
    }
    winner = c.winner;
  }
}

}  // namespace

TEST_CASE("classify_thin") {
  auto v = classify_thin(sys("2/5", "7/20", "1/4"), 10);
  REQUIRE(std::holds_alternative<HoleAt>(v));
  CHECK(std::get<HoleAt>(v).k == 1);

  auto deep = classify_thin(sys("3/5", "1/4", "3/20"), 50);
  auto oracle = brute_force_classify(sys("3/5", "1/4", "3/20"), 50);
  REQUIRE(deep.index() == oracle.index());
  // Frozen from the elementary-iteration oracle.
  REQUIRE(std::holds_alternative<HoleAt>(deep));
  CHECK(std::get<HoleAt>(deep).k == std::get<HoleAt>(oracle).k);
  CHECK(std::get<HoleAt>(deep).k == 2);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    SpecialSystem s = random_system(rng);
    auto a = classify_thin(s, 20);
    auto b = brute_force_classify(s, 20);
    REQUIRE(a.index() == b.index());
    if (auto* h = std::get_if<HoleAt>(&a)) CHECK(h->k == std::get<HoleAt>(b).k);
  }

  CHECK(error_of([] { classify_thin(sys("3/5", "1/4", "3/20"), 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("the cyclic Perron point survives") {
  // Sorted lengths M^k v0 with M the cycle step matrix approximate the Perron
  // direction; forward induction undoes the k cycle steps one at a time.
  Vec3<BigInt> v{BigInt(5), BigInt(3), BigInt(2)};
  const int k = 80;
  for (int i = 0; i < k; ++i) v = {v[0] + v[1] + v[2], v[0], v[1]};
  BigInt total = v[0] + v[1] + v[2];
  SpecialSystem s = SpecialSystem::make(Rational(v[0], total), Rational(v[1], total), Rational(v[2], total));
  auto verdict = classify_thin(s, 60);
  CHECK(std::holds_alternative<Survived>(verdict));

  // Power-iteration Perron vector of the cycle matrix in doubles.
  double x[3] = {1, 1, 1};
  for (int i = 0; i < 200; ++i) {
    double y[3] = {x[0] + x[1] + x[2], x[0], x[1]};
    double t = y[0] + y[1] + y[2];
    for (int j = 0; j < 3; ++j) x[j] = y[j] / t;
  }
  CHECK(s.sorted(0).to_double() == doctest::Approx(x[0]).epsilon(1e-12));
  CHECK(s.sorted(1).to_double() == doctest::Approx(x[1]).epsilon(1e-12));
}

TEST_CASE("orbit exploration") {
  auto special = IntervalPairSystem::from_special(sys("3/5", "1/4", "3/20"));
  OrbitGraph at_zero = explore_orbit(special, R("0"), 1);
  long from_zero = 0;
  for (const auto& e : at_zero.edges)
    if (e.from == 0) ++from_zero;
  CHECK(from_zero >= 3);

  std::size_t previous = 0;
  for (long len = 0; len <= 8; ++len) {
    std::size_t n = explore_orbit(special, R("1/7"), len).vertices.size();
    CHECK(n >= previous);
    previous = n;
  }

  auto hole = IntervalPairSystem::from_special(sys("2/5", "7/20", "1/4"));
  auto witness = hole.uncovered_point();
  REQUIRE(witness.has_value());
  CHECK(*witness > R("2/5"));
  CHECK(*witness < R("3/5"));
  CHECK(explore_orbit(hole, *witness, 1000).vertices.size() == 1);
  CHECK(!special.uncovered_point().has_value());

  CHECK(error_of([&] { explore_orbit(special, R("3/2"), 3); }) == ErrorCode::PointOutsideSupport);
}
