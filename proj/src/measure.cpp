#include "rauzy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rauzy/error.hpp"
#include "rauzy/random.hpp"

namespace rauzy {

namespace {

Vec3<BigInt> weights_after(const RauzyPath& path) {
  CocycleMatrix b = cocycle_of(path);
  return b * Vec3<BigInt>{1, 1, 1};
}

const BigInt& at(const Vec3<BigInt>& w, Letter l) { return w[static_cast<std::size_t>(l.index())]; }

// Lengths in the ordered cone of `order`, as sorted coordinates of a letter vector.
bool strictly_ordered(const LengthVector& v, const Perm3& order) {
  return v[order.at(0)] > v[order.at(1)] && v[order.at(1)] > v[order.at(2)] && v[order.at(2)].is_positive();
}

}  // namespace

Rational path_probability(const WeightVector& q, const RauzyPath& path) {
  for (const auto& x : q)
    if (!x.is_positive()) throw Error(ErrorCode::InvalidArgument, "weights must be positive");
  CocycleMatrix b = cocycle_of(path);
  Rational num(1), den(1);
  for (int r = 0; r < 3; ++r) {
    Rational row(0);
    for (int c = 0; c < 3; ++c) row += Rational(b(r, c)) * q[static_cast<std::size_t>(c)];
    num *= q[static_cast<std::size_t>(r)];
    den *= row;
  }
  return num / den;
}

Rational cylinder_measure(const RauzyPath& path) {
  Vec3<BigInt> w = weights_after(path);
  const Perm3 end = path.end();
  BigInt top = at(w, end.at(0));
  BigInt two = top + at(w, end.at(1));
  BigInt all = w[0] + w[1] + w[2];
  return Rational(BigInt(6), top * two * all);
}

Rational hole_measure(const RauzyPath& path) {
  Vec3<BigInt> w = weights_after(path);
  const Perm3 end = path.end();
  BigInt two = at(w, end.at(0)) + at(w, end.at(1));
  BigInt all = w[0] + w[1] + w[2];
  return Rational(BigInt(6), two * all * (all + at(w, end.at(0))));
}

Rational at_least_wins_measure(const RauzyPath& path, long k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "win count must be at least 1");
  RauzyPath keep = path;
  if (k > 1) keep.append(PathEdge::make(path.end(), Branch::Keep, k - 1));
  return cylinder_measure(keep) - hole_measure(keep);
}

double log_of(const Rational& x) {
  if (!x.is_positive()) throw Error(ErrorCode::InvalidArgument, "logarithm of a non-positive number");
  auto log_int = [](const BigInt& z) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
  };
  return log_int(x.num()) - log_int(x.den());
}

Vec3<double> sample_nu(std::mt19937_64& rng, const Vec3<double>& q) {
  double u = uniform_open01(rng), v = uniform_open01(rng);
  if (u > v) std::swap(u, v);
  Vec3<double> y{u, v - u, 1.0 - v};
  double total = 0;
  for (int i = 0; i < 3; ++i) {
    y[static_cast<std::size_t>(i)] /= q[static_cast<std::size_t>(i)];
    total += y[static_cast<std::size_t>(i)];
  }
  for (double& x : y) x /= total;
  return y;
}

KerckhoffResult mc_kerckhoff(double T, const Vec3<double>& q, std::size_t samples, std::uint64_t seed,
                             unsigned workers) {
  if (!(T > 1)) throw Error(ErrorCode::InvalidArgument, "T must exceed 1");
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  for (double x : q)
    if (!(x > 0)) throw Error(ErrorCode::InvalidArgument, "weights must be positive");
  std::size_t blocks = block_count(samples);
  std::vector<std::size_t> hits(blocks, 0);
  for_each_block(blocks, workers, [&](std::size_t block) {
    auto rng = block_rng(seed, block);
    std::size_t last = std::min(samples, (block + 1) * kBlockSize);
    for (std::size_t i = block * kBlockSize; i < last; ++i) {
      Vec3<double> l = sample_nu(rng, q);
      std::size_t w = static_cast<std::size_t>(std::max_element(l.begin(), l.end()) - l.begin());
      double rest = 1.0 - l[w];
      if (!(l[w] > rest)) continue;
      double wins = std::ceil(l[w] / rest) - 1.0;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j != w && q[j] + wins * q[w] > T * q[j]) {
          ++hits[block];
          break;
        }
      }
    }
  });
  KerckhoffResult r;
  r.T = T;
  r.samples = samples;
  for (auto h : hits) r.hits += h;
  r.frequency = static_cast<double>(r.hits) / static_cast<double>(samples);
  r.bound = 1.0 / T;
  r.sigma = std::sqrt(r.bound * (1.0 - r.bound) / static_cast<double>(samples));
  r.pass = r.frequency <= r.bound + 3.0 * r.sigma;
  return r;
}

BalanceReport mc_balance(const std::vector<double>& C_grid, std::size_t samples, std::uint64_t seed,
                         const Vec3<double>& q, unsigned workers, long step_cap) {
  if (C_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty C grid");
  for (double c : C_grid)
    if (!(c > 1)) throw Error(ErrorCode::InvalidArgument, "C values must exceed 1");
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  for (double x : q)
    if (!(x > 0)) throw Error(ErrorCode::InvalidArgument, "weights must be positive");
  const double max_q = std::max({q[0], q[1], q[2]});

  struct Tally {
    std::vector<std::size_t> hits;
    std::size_t holes = 0;
    std::size_t capped = 0;
  };
  std::size_t blocks = block_count(samples);
  std::vector<Tally> tallies(blocks, Tally{std::vector<std::size_t>(C_grid.size(), 0), 0, 0});
  for_each_block(blocks, workers, [&](std::size_t block) {
    auto rng = block_rng(seed, block);
    Tally& t = tallies[block];
    std::size_t last = std::min(samples, (block + 1) * kBlockSize);
    for (std::size_t i = block * kBlockSize; i < last; ++i) {
      Vec3<double> l = sample_nu(rng, q);
      Vec3<double> bq = q;
      bool seen[3] = {false, false, false};
      int distinct = 0;
      long steps = 0;
      bool done = false, hole = false;
      while (!done && steps < step_cap) {
        std::size_t w = static_cast<std::size_t>(std::max_element(l.begin(), l.end()) - l.begin());
        double total = l[0] + l[1] + l[2];
        double rest = total - l[w];
        if (!(l[w] > rest)) {
          hole = true;
          break;
        }
        double wins = std::ceil(l[w] / rest) - 1.0;
        if (!seen[w]) {
          seen[w] = true;
          if (++distinct == 3) {
            wins = 1;  // the first win of the last letter completes the path
            done = true;
          }
        }
        l[w] -= wins * rest;
        for (std::size_t j = 0; j < 3; ++j)
          if (j != w) bq[j] += wins * bq[w];
        steps += static_cast<long>(wins);
        double s = l[0] + l[1] + l[2];
        for (double& x : l) x /= s;
      }
      if (hole) {
        ++t.holes;
        continue;
      }
      if (!done) {
        ++t.capped;
        continue;
      }
      double big = std::max({bq[0], bq[1], bq[2]}), small = std::min({bq[0], bq[1], bq[2]});
      for (std::size_t c = 0; c < C_grid.size(); ++c)
        if (big < C_grid[c] * std::min(small, max_q)) ++t.hits[c];
    }
  });
  BalanceReport report;
  report.C = C_grid;
  report.samples = samples;
  std::vector<std::size_t> hits(C_grid.size(), 0);
  for (const auto& t : tallies) {
    report.holes += t.holes;
    report.capped += t.capped;
    for (std::size_t c = 0; c < hits.size(); ++c) hits[c] += t.hits[c];
  }
  for (auto h : hits) report.probability.push_back(static_cast<double>(h) / static_cast<double>(samples));
  return report;
}

double roof(const LengthVector& lambda, const RauzyPath& path) {
  Rational total = lambda.sum();
  if (!total.is_positive()) throw Error(ErrorCode::OutsideCylinder, "lengths must be positive");
  LengthVector l = lambda;
  for (auto& x : l.values) x /= total;
  if (!strictly_ordered(l, path.start)) throw Error(ErrorCode::OutsideCylinder, "lengths are not ordered as the path's start state");
  CocycleMatrix m = length_matrix_of(path);
  BigInt det = m.det();
  CocycleMatrix inv = m.adjugate();
  LengthVector image;
  for (int r = 0; r < 3; ++r) {
    Rational acc(0);
    for (int c = 0; c < 3; ++c) acc += Rational(inv(r, c)) * l.values[static_cast<std::size_t>(c)];
    image.values[static_cast<std::size_t>(r)] = acc / Rational(det);
  }
  if (!strictly_ordered(image, path.end())) throw Error(ErrorCode::OutsideCylinder, "lengths do not follow the path");
  return -log_of(image.sum());
}

double roof(const ChartPoint& p) {
  auto out = apply_T(p);
  if (std::holds_alternative<HoleOutcome>(out)) throw Error(ErrorCode::Hole, "point lies in the hole a < 1/2");
  if (auto* tie = std::get_if<TieOutcome>(&out)) throw Error(ErrorCode::TieEncountered, tie->reason);
  return -std::log(std::get<MapImage>(out).denominator);
}

RauzyPath default_loop() {
  RauzyPath loop{Perm3::identity(), {}};
  for (int i = 0; i < 3; ++i) loop.append(PathEdge::make(loop.end(), Branch::Cycle, 1));
  return loop;
}

namespace {

void check_loop(const RauzyPath& loop) {
  loop.validate();
  if (loop.edges.empty() || !(loop.end() == loop.start) || !is_complete(loop) || !is_positive(loop))
    throw Error(ErrorCode::PreconditionViolated, "loop must be complete, positive and closed");
  for (const auto& e : loop.edges)
    if (e.branch == Branch::Keep) throw Error(ErrorCode::PreconditionViolated, "loop blocks must end in Swap or Cycle");
}

struct Outside {};
struct Died {
  bool tie = false;
  std::string reason;
};
using RawReturn = std::variant<ReturnRecord, NoReturn, Outside, Died>;

RawReturn raw_first_return(const ChartPoint& p, const RauzyPath& loop, long depth_cap) {
  const std::size_t L = loop.edges.size();
  std::vector<MarkovCell> sym;
  std::vector<Perm3> state{loop.start};
  std::vector<ChartPoint> pts{p};
  std::vector<double> roofs;
  std::optional<Died> death;

  auto extend = [&]() -> bool {
    if (death) return false;
    auto out = apply_T(pts.back());
    if (std::holds_alternative<HoleOutcome>(out)) {
      death = Died{false, "orbit fell in the hole"};
      return false;
    }
    if (auto* tie = std::get_if<TieOutcome>(&out)) {
      death = Died{true, tie->reason};
      return false;
    }
    auto& im = std::get<MapImage>(out);
    sym.push_back(im.cell);
    roofs.push_back(-std::log(im.denominator));
    state.push_back(PathEdge::make(state.back(), im.cell.branch, im.cell.n).to);
    pts.push_back(std::move(im.point));
    return true;
  };
  // 1: loop starts at k; 0: it does not; -1: the orbit ends before we can tell.
  auto loop_at = [&](std::size_t k) -> int {
    if (!(state.size() > k && state[k] == loop.start)) {
      while (state.size() <= k)
        if (!extend()) return -1;
      if (!(state[k] == loop.start)) return 0;
    }
    for (std::size_t j = 0; j < L; ++j) {
      while (sym.size() <= k + j)
        if (!extend()) return -1;
      const auto& e = loop.edges[j];
      if (!(sym[k + j] == MarkovCell{e.n, e.branch})) return 0;
    }
    return 1;
  };

  if (loop_at(0) != 1) return Outside{};
  for (std::size_t k = L;; ++k) {
    if (static_cast<long>(k) > depth_cap) {
      double total = 0;
      for (std::size_t i = 0; i < k && i < roofs.size(); ++i) total += roofs[i];
      return NoReturn{static_cast<long>(k) - 1, total};
    }
    int hit = loop_at(k);
    if (hit < 0) return *death;
    if (hit == 1) {
      ReturnRecord rec;
      rec.start = p;
      rec.path.start = loop.start;
      for (std::size_t i = 0; i < k; ++i) {
        rec.path.append(PathEdge::make(state[i], sym[i].branch, sym[i].n));
        rec.roof_value += roofs[i];
      }
      rec.return_point = pts[k];
      return rec;
    }
  }
}

}  // namespace

ReturnOutcome first_return(const ChartPoint& p, const RauzyPath& loop, long depth_cap) {
  check_loop(loop);
  auto raw = raw_first_return(p, loop, depth_cap);
  if (auto* r = std::get_if<ReturnRecord>(&raw)) return std::move(*r);
  if (auto* n = std::get_if<NoReturn>(&raw)) return *n;
  if (std::holds_alternative<Outside>(raw)) throw Error(ErrorCode::OutsideCylinder, "point does not follow the loop");
  const auto& d = std::get<Died>(raw);
  throw Error(d.tie ? ErrorCode::TieEncountered : ErrorCode::Hole, d.reason);
}

ChartPoint sample_section(std::mt19937_64& rng, const RauzyPath& loop) {
  Mat3<double> k = Mat3<double>::identity();
  for (const auto& e : loop.edges) k = k * cell_matrix(MarkovCell{e.n, e.branch}).cast<double>();
  // Generators of the ordered cone: (1,0,0), (1,1,0), (1,1,1).
  k = k * Mat3<double>{{1, 1, 1, 0, 1, 1, 0, 0, 1}};
  Vec3<double> q = k.transpose() * Vec3<double>{1, 1, 1};
  Vec3<double> l = k * sample_nu(rng, q);
  double total = l[0] + l[1] + l[2];
  return ChartPoint{l[0] / total, l[1] / total, std::nullopt};
}

std::vector<double> default_tail_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 24; ++k) g.push_back(std::pow(10.0, k / 4.0));
  return g;
}

TailCurve roof_tail(const RauzyPath& loop, const TailOptions& o) {
  check_loop(loop);
  if (o.returns < 1) throw Error(ErrorCode::InvalidArgument, "need at least one return");
  if (o.T_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty T grid");
  for (std::size_t i = 0; i < o.T_grid.size(); ++i)
    if (!(o.T_grid[i] > 1) || (i > 0 && !(o.T_grid[i] > o.T_grid[i - 1])))
      throw Error(ErrorCode::InvalidArgument, "T grid must be increasing and above 1");

  enum Kind : std::uint8_t { Returned, Capped, Hole, Tie };
  struct Result {
    Kind kind;
    double roof;
  };
  // Rounds have a fixed number of blocks so the stopping point does not
  // depend on the worker count.
  constexpr std::size_t kRoundBlocks = 64;
  std::vector<Result> kept;  // returned and capped samples, in attempt order
  TailCurve curve;
  curve.thresholds = o.T_grid;
  std::size_t next_block = 0;
  bool done = false;
  while (!done && curve.attempts < o.max_attempts) {
    std::vector<std::vector<Result>> round(kRoundBlocks);
    for_each_block(kRoundBlocks, o.workers, [&](std::size_t j) {
      auto rng = block_rng(o.seed, next_block + j);
      auto& out = round[j];
      out.reserve(kBlockSize);
      for (std::size_t i = 0; i < kBlockSize; ++i) {
        ChartPoint p = sample_section(rng, loop);
        auto raw = raw_first_return(p, loop, o.depth_cap);
        if (auto* r = std::get_if<ReturnRecord>(&raw)) {
          out.push_back({Returned, r->roof_value});
        } else if (auto* n = std::get_if<NoReturn>(&raw)) {
          out.push_back({Capped, n->roof_so_far});
        } else if (auto* d = std::get_if<Died>(&raw)) {
          out.push_back({d->tie ? Tie : Hole, 0});
        } else {
          out.push_back({Tie, 0});  // rounding pushed the sample across a cell boundary
        }
      }
    });
    next_block += kRoundBlocks;
    for (const auto& block : round) {
      for (const Result& r : block) {
        if (curve.attempts >= o.max_attempts) break;
        ++curve.attempts;
        switch (r.kind) {
          case Returned: ++curve.returned; kept.push_back(r); break;
          case Capped: ++curve.no_return; kept.push_back(r); break;
          case Hole: ++curve.holes; break;
          case Tie: ++curve.ties; break;
        }
        if (curve.returned >= o.returns) {
          done = true;
          break;
        }
      }
      if (done) break;
    }
  }

  std::vector<double> xs, ys;
  for (double T : o.T_grid) {
    double cut = std::log(T);
    std::size_t count = 0;
    for (const Result& r : kept)
      if (r.roof >= cut) ++count;
    curve.exceed_counts.push_back(count);
    double prob = static_cast<double>(count) / static_cast<double>(curve.attempts);
    curve.probabilities.push_back(prob);
    if (count >= 100 && count < kept.size()) {
      xs.push_back(cut);
      ys.push_back(std::log(prob));
    }
  }
  curve.fit_points = xs.size();
  if (xs.size() >= 2) {
    LineFit fit = fit_line(xs, ys);
    curve.fitted_exponent = -fit.slope;
    curve.fit_residual = fit.residual;
  } else {
    curve.fit_residual = std::numeric_limits<double>::infinity();
  }

  double sigma = curve.fitted_exponent / 2;
  double top = std::log(o.T_grid.back()), decade_below = top - std::log(10.0);
  double full = 0, lower = 0;
  for (const Result& r : kept) {
    if (r.kind != Returned) continue;
    double w = std::exp(sigma * r.roof);
    if (r.roof < top) full += w;
    if (r.roof < decade_below) lower += w;
  }
  curve.partial_sum_growth = full > 0 ? (full - lower) / full : 0;
  return curve;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "fit needs at least two points");
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::InvalidArgument, "fit needs two distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace rauzy
