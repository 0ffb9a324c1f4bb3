#include "rauzy/markov_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "rauzy/error.hpp"
#include "rauzy/random.hpp"

namespace rauzy {

namespace {

bool exact_in_chart(const Rational& a, const Rational& b) {
  Rational c = Rational(1) - a - b;
  return a > b && b > c && c.is_positive();
}

// Counter n, reduced length r = a - n(1-a) and branch, before renormalizing.
template <class T>
struct Split {
  long n;
  T r;
  T s;
  Branch branch;
};

template <class T>
using SplitOutcome = std::variant<Split<T>, HoleOutcome, TieOutcome>;

SplitOutcome<Rational> split_exact(const ExactChartPoint& p) {
  if (!exact_in_chart(p.a, p.b)) throw Error(ErrorCode::PreconditionViolated, "point is not in the chart a > b > c > 0");
  const Rational half(1, 2);
  if (p.a < half) return HoleOutcome{};
  if (p.a == half) return TieOutcome{"a = b + c"};
  Rational s = Rational(1) - p.a;
  Rational q = p.a / s;
  BigInt floor_q;
  mpz_fdiv_q(floor_q.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
  if (q.den() == 1) return TieOutcome{"a reaches b + c after some wins"};
  if (!floor_q.fits_slong_p()) throw Error(ErrorCode::PreconditionViolated, "counter does not fit in a long");
  long n = floor_q.get_si();
  Rational r = p.a - Rational(n) * s;
  Rational c = p.c();
  if (r == p.b || r == c) return TieOutcome{"reduced length equals another length"};
  Branch branch = r > p.b ? Branch::Keep : (r > c ? Branch::Swap : Branch::Cycle);
  return Split<Rational>{n, r, s, branch};
}

SplitOutcome<double> split_float(const ChartPoint& p) {
  const double tol = kBoundaryTolerance;
  double a = p.a, b = p.b, c = p.c();
  auto near_boundary = [&]() -> SplitOutcome<double> {
    if (p.exact) {
      auto exact = split_exact(*p.exact);
      if (auto* s = std::get_if<Split<Rational>>(&exact))
        return Split<double>{s->n, s->r.to_double(), s->s.to_double(), s->branch};
      if (std::holds_alternative<HoleOutcome>(exact)) return HoleOutcome{};
      return std::get<TieOutcome>(exact);
    }
    return TieOutcome{"within float tolerance of a cell boundary"};
  };
  if (!(a > b && b > c && c > 0)) {
    if (p.exact) return near_boundary();
    throw Error(ErrorCode::PreconditionViolated, "point is not in the chart a > b > c > 0");
  }
  if (a - b < tol || b - c < tol || std::abs(a - 0.5) < tol) return near_boundary();
  if (a < 0.5) return HoleOutcome{};
  double s = 1.0 - a;  // exact for a in [1/2, 1]
  double n = std::floor(a / s);
  double r = std::fma(-n, s, a);
  if (r < 0) {
    n -= 1;
    r += s;
  } else if (r >= s) {
    n += 1;
    r -= s;
  }
  if (n > 9.0e15) throw Error(ErrorCode::PreconditionViolated, "counter too large for float classification");
  if (r < tol || s - r < tol || std::abs(r - b) < tol || std::abs(r - c) < tol) return near_boundary();
  Branch branch = r > b ? Branch::Keep : (r > c ? Branch::Swap : Branch::Cycle);
  return Split<double>{static_cast<long>(n), r, s, branch};
}

template <class T>
std::pair<T, T> image_of(const Split<T>& sp, const T& b, const T& c) {
  T den = sp.r + sp.s;
  switch (sp.branch) {
    case Branch::Keep: return {sp.r / den, b / den};
    case Branch::Swap: return {b / den, sp.r / den};
    case Branch::Cycle: break;
  }
  return {b / den, c / den};
}

template <class T, class Fn>
auto forward(const ChartPoint& p, Fn&& on_split) {
  auto sp = split_float(p);
  if (std::holds_alternative<HoleOutcome>(sp)) throw Error(ErrorCode::Hole, "point lies in the hole a < 1/2");
  if (auto* tie = std::get_if<TieOutcome>(&sp)) throw Error(ErrorCode::TieEncountered, tie->reason);
  return on_split(std::get<Split<double>>(sp));
}

// No strictness check: closure points (cell vertices) are legitimate here.
ChartPoint point_from(const Vec3<Rational>& v) {
  Rational total = v[0] + v[1] + v[2];
  Rational a = v[0] / total, b = v[1] / total;
  return ChartPoint{a.to_double(), b.to_double(), ExactChartPoint{a, b}};
}

Vec3<Rational> times(const IntMatrix& m, const Vec3<Rational>& v) {
  Vec3<Rational> out;
  for (int r = 0; r < 3; ++r) {
    Rational acc(0);
    for (int c = 0; c < 3; ++c) acc += Rational(m(r, c)) * v[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

}  // namespace

ChartPoint ChartPoint::make(double a, double b) {
  ChartPoint p{a, b, std::nullopt};
  if (!p.in_chart()) throw Error(ErrorCode::InvalidArgument, "chart point needs a > b > c > 0 with c = 1 - a - b");
  return p;
}

ChartPoint ChartPoint::make_exact(const Rational& a, const Rational& b) {
  if (!exact_in_chart(a, b)) throw Error(ErrorCode::InvalidArgument, "chart point needs a > b > c > 0 with c = 1 - a - b");
  return ChartPoint{a.to_double(), b.to_double(), ExactChartPoint{a, b}};
}

bool ChartPoint::in_chart() const {
  if (exact) return exact_in_chart(exact->a, exact->b);
  return std::isfinite(a) && std::isfinite(b) && a > b && b > c() && c() > 0;
}

double chart_distance(const ChartPoint& p, const ChartPoint& q) { return std::hypot(p.a - q.a, p.b - q.b); }

CellOutcome cell_of(const ExactChartPoint& p) {
  auto sp = split_exact(p);
  if (auto* s = std::get_if<Split<Rational>>(&sp)) return MarkovCell{s->n, s->branch};
  if (std::holds_alternative<HoleOutcome>(sp)) return HoleOutcome{};
  return std::get<TieOutcome>(sp);
}

CellOutcome cell_of(const ChartPoint& p) {
  auto sp = split_float(p);
  if (auto* s = std::get_if<Split<double>>(&sp)) return MarkovCell{s->n, s->branch};
  if (std::holds_alternative<HoleOutcome>(sp)) return HoleOutcome{};
  return std::get<TieOutcome>(sp);
}

MapOutcome apply_T(const ChartPoint& p) {
  if (p.exact) {
    auto sp = split_exact(*p.exact);
    if (std::holds_alternative<HoleOutcome>(sp)) return HoleOutcome{};
    if (auto* tie = std::get_if<TieOutcome>(&sp)) return *tie;
    const auto& s = std::get<Split<Rational>>(sp);
    auto [a, b] = image_of(s, p.exact->b, p.exact->c());
    return MapImage{ChartPoint::make_exact(a, b), MarkovCell{s.n, s.branch}, (s.r + s.s).to_double()};
  }
  auto sp = split_float(p);
  if (std::holds_alternative<HoleOutcome>(sp)) return HoleOutcome{};
  if (auto* tie = std::get_if<TieOutcome>(&sp)) return *tie;
  const auto& s = std::get<Split<double>>(sp);
  auto [a, b] = image_of(s, p.b, p.c());
  return MapImage{ChartPoint{a, b, std::nullopt}, MarkovCell{s.n, s.branch}, s.r + s.s};
}

ChartPoint swap_branch_image(const ChartPoint& p) {
  return forward<double>(p, [&](const Split<double>& s) {
    double den = static_cast<double>(s.n) * p.a - static_cast<double>(s.n - 1);
    double reduced = static_cast<double>(s.n + 1) * p.a - static_cast<double>(s.n);
    return ChartPoint{p.b / den, reduced / den, std::nullopt};
  });
}

double jacobian(const ChartPoint& p) {
  return forward<double>(p, [](const Split<double>& s) {
    double den = s.r + s.s;
    return 1.0 / (den * den * den);
  });
}

IntMatrix cell_matrix(const MarkovCell& cell) {
  if (cell.n < 1) throw Error(ErrorCode::InvalidArgument, "cell counter must be at least 1");
  long n = cell.n;
  switch (cell.branch) {
    case Branch::Keep: return IntMatrix{{1, n, n, 0, 1, 0, 0, 0, 1}};
    case Branch::Swap: return IntMatrix{{n, 1, n, 1, 0, 0, 0, 0, 1}};
    case Branch::Cycle: break;
  }
  return IntMatrix{{n, n, 1, 1, 0, 0, 0, 1, 0}};
}

std::array<ChartPoint, 3> cell_vertices(const MarkovCell& cell) {
  IntMatrix m = cell_matrix(cell);
  // Cone generators of the image: the whole ordered simplex, or its hole part.
  std::array<Vec3<Rational>, 3> gens = cell.branch == Branch::Keep
                                           ? std::array<Vec3<Rational>, 3>{{{1, 1, 0}, {2, 1, 1}, {1, 1, 1}}}
                                           : std::array<Vec3<Rational>, 3>{{{1, 1, 0}, {1, 0, 0}, {1, 1, 1}}};
  std::array<ChartPoint, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3<Rational> v = times(m, gens[i]);
    Rational total = v[0] + v[1] + v[2];
    Rational a = v[0] / total, b = v[1] / total;
    // Vertices sit on the chart's boundary, so skip the strict validity check.
    out[i] = ChartPoint{a.to_double(), b.to_double(), ExactChartPoint{a, b}};
  }
  return out;
}

std::array<ChartPoint, 3> cell_vertices(long n) { return cell_vertices(MarkovCell{n, Branch::Swap}); }

ChartPoint inverse_branch(const MarkovCell& cell, const ChartPoint& p) {
  IntMatrix m = cell_matrix(cell);
  if (p.exact) {
    if (cell.branch == Branch::Keep && !(p.exact->a < Rational(1, 2)))
      throw Error(ErrorCode::PreconditionViolated, "Keep cells only reach the hole region a < 1/2");
    return point_from(times(m, {p.exact->a, p.exact->b, p.exact->c()}));
  }
  if (cell.branch == Branch::Keep && !(p.a < 0.5))
    throw Error(ErrorCode::PreconditionViolated, "Keep cells only reach the hole region a < 1/2");
  Vec3<double> v{p.a, p.b, p.c()};
  Vec3<double> w = m.cast<double>() * v;
  double total = w[0] + w[1] + w[2];
  return ChartPoint{w[0] / total, w[1] / total, std::nullopt};
}

namespace {

struct OrbitSink {
  std::function<void(std::size_t index, const Vec3<double>&, const Vec3<Rational>*)> emit;
};

void run_chaos_game(const ChaosGameOptions& o, const OrbitSink& sink) {
  if (o.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be at least 1");
  std::array<double, 3> cumulative{1.0 / 3.0, 2.0 / 3.0, 1.0};
  if (o.weights) {
    const auto& w = *o.weights;
    for (double x : w)
      if (!(x > 0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "weights must be positive");
    double total = w[0] + w[1] + w[2];
    cumulative = {w[0] / total, (w[0] + w[1]) / total, 1.0};
  }
  std::size_t blocks = block_count(o.count);
  for_each_block(blocks, o.workers, [&](std::size_t block) {
    auto rng = block_rng(o.seed, block);
    Vec3<double> x{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    Vec3<Rational> xe{Rational(1, 3), Rational(1, 3), Rational(1, 3)};
    auto step = [&] {
      double u = uniform01(rng);
      std::size_t w = u < cumulative[0] ? 0 : (u < cumulative[1] ? 1 : 2);
      double d = 2.0 - x[w];
      for (std::size_t i = 0; i < 3; ++i) x[i] = (i == w ? 1.0 : x[i]) / d;
      if (o.exact) {
        Rational de = Rational(2) - xe[w];
        for (std::size_t i = 0; i < 3; ++i) xe[i] = (i == w ? Rational(1) : xe[i]) / de;
      }
    };
    for (std::size_t i = 0; i < o.burn_in; ++i) step();
    std::size_t first = block * kBlockSize;
    std::size_t last = std::min(o.count, first + kBlockSize);
    for (std::size_t i = first; i < last; ++i) {
      step();
      sink.emit(i, x, o.exact ? &xe : nullptr);
    }
  });
}

}  // namespace

std::vector<ChartPoint> chaos_game(const ChaosGameOptions& options) {
  std::vector<ChartPoint> out(options.count);
  run_chaos_game(options, OrbitSink{[&](std::size_t i, const Vec3<double>& x, const Vec3<Rational>* xe) {
    if (xe) {
      Vec3<Rational> s = *xe;
      std::sort(s.begin(), s.end(), std::greater<>());
      out[i] = ChartPoint{s[0].to_double(), s[1].to_double(), ExactChartPoint{s[0], s[1]}};
      return;
    }
    Vec3<double> s = x;
    std::sort(s.begin(), s.end(), std::greater<>());
    out[i] = ChartPoint{s[0], s[1], std::nullopt};
  }});
  return out;
}

std::vector<std::array<double, 3>> chaos_game_simplex(const ChaosGameOptions& options) {
  std::vector<std::array<double, 3>> out(options.count);
  run_chaos_game(options, OrbitSink{[&](std::size_t i, const Vec3<double>& x, const Vec3<Rational>*) { out[i] = x; }});
  return out;
}

}  // namespace rauzy
