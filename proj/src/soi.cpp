#include "rauzy/soi.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "rauzy/error.hpp"

namespace rauzy {

namespace {

Perm3 sort_letters(const LengthVector& lengths) {
  Perm3 p;
  std::sort(p.order.begin(), p.order.end(),
            [&](Letter x, Letter y) { return lengths[x] > lengths[y]; });
  return p;
}

}  // namespace

SpecialSystem SpecialSystem::make(const Rational& a, const Rational& b, const Rational& c) {
  return from_lengths(LengthVector{{a, b, c}});
}

SpecialSystem SpecialSystem::from_lengths(const LengthVector& lengths) {
  for (const Rational& v : lengths.values) {
    if (!v.is_positive()) throw Error(ErrorCode::NonPositive, "length " + v.str() + " is not positive");
  }
  if (lengths.sum() != Rational(1)) {
    throw Error(ErrorCode::NotNormalized, "lengths sum to " + lengths.sum().str());
  }
  const auto& v = lengths.values;
  if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
    throw Error(ErrorCode::TieEncountered, "two lengths are equal");
  }
  return SpecialSystem(lengths, sort_letters(lengths));
}

IntMatrix step_matrix(Branch branch) {
  switch (branch) {
    case Branch::Keep: return IntMatrix{{1, 1, 1, 0, 1, 0, 0, 0, 1}};
    case Branch::Swap: return IntMatrix{{1, 1, 1, 1, 0, 0, 0, 0, 1}};
    case Branch::Cycle: return IntMatrix{{1, 1, 1, 1, 0, 0, 0, 1, 0}};
  }
  return IntMatrix::identity();
}

IntMatrix accelerated_matrix(Branch branch, long n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "counter must be positive");
  switch (branch) {
    case Branch::Swap: return IntMatrix{{n, 1, n, 1, 0, 0, 0, 0, 1}};
    case Branch::Cycle: return IntMatrix{{n, n, 1, 1, 0, 0, 0, 1, 0}};
    case Branch::Keep: break;
  }
  throw Error(ErrorCode::InvalidArgument, "an accelerated step ends with a change of winner");
}

IntMatrix letter_step_matrix(Letter winner) {
  IntMatrix m = IntMatrix::identity();
  for (int c = 0; c < 3; ++c) m(winner.index(), c) = 1;
  return m;
}

StepOutcome rauzy_step(const SpecialSystem& s) {
  const Perm3& order = s.order();
  const Rational& a = s.sorted(0);
  const Rational& b = s.sorted(1);
  const Rational& c = s.sorted(2);
  Rational rest = b + c;
  if (a < rest) return HoleOutcome{};
  if (a == rest) return TieOutcome{"largest length equals the sum of the other two"};

  Rational reduced = a - rest;
  if (reduced == b || reduced == c) return TieOutcome{"reduced length equals another length"};

  Branch branch = reduced > b ? Branch::Keep : (reduced > c ? Branch::Swap : Branch::Cycle);
  // The total after the step is reduced + b + c = a.
  LengthVector next = s.lengths();
  next[order.largest()] = reduced;
  for (Rational& v : next.values) v /= a;

  StepContinue out{SpecialSystem::from_lengths(next), order.largest(), step_matrix(branch), branch, a};
  return out;
}

AcceleratedOutcome accelerated_step(const SpecialSystem& s) {
  SpecialSystem current = s;
  IntMatrix composite = IntMatrix::identity();
  Rational scale(1);
  long wins = 0;
  for (;;) {
    StepOutcome step = rauzy_step(current);
    if (std::holds_alternative<HoleOutcome>(step)) return HoleAfter{wins};
    if (auto* tie = std::get_if<TieOutcome>(&step)) return *tie;
    auto& cont = std::get<StepContinue>(step);
    ++wins;
    composite = composite * cont.length_matrix;
    scale *= cont.scale;
    if (cont.branch == Branch::Keep) {
      current = cont.system;
      continue;
    }
    if (!(composite == accelerated_matrix(cont.branch, wins))) {
      throw Error(ErrorCode::PreconditionViolated, "composite matrix does not match the accelerated shape");
    }
    return AcceleratedContinue{wins, cont.system, cont.winner, composite, cont.branch, scale};
  }
}

ThinVerdict classify_thin(const SpecialSystem& s, long max_iters) {
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be at least 1");
  SpecialSystem current = s;
  for (long k = 1; k <= max_iters; ++k) {
    AcceleratedOutcome out = accelerated_step(current);
    if (std::holds_alternative<HoleAfter>(out)) return HoleAt{k};
    if (std::holds_alternative<TieOutcome>(out)) return TieAt{k};
    current = std::get<AcceleratedContinue>(out).system;
  }
  return Survived{max_iters};
}

// ---------------------------------------------------------------------------

IntervalPairSystem IntervalPairSystem::from_special(const SpecialSystem& s) {
  IntervalPairSystem out;
  out.support = {Rational(0), Rational(1)};
  for (int i = 0; i < 3; ++i) {
    const Rational& len = s.length(Letter(i));
    out.pairs[static_cast<std::size_t>(i)] = {{Rational(0), len}, {Rational(1) - len, Rational(1)}};
  }
  return out;
}

void IntervalPairSystem::validate() const {
  if (!(support.lo < support.hi)) throw Error(ErrorCode::PreconditionViolated, "empty support");
  for (const auto& p : pairs) {
    if (p.left.length() != p.right.length() || p.left.lo > p.left.hi) {
      throw Error(ErrorCode::PreconditionViolated, "pair bases have different lengths");
    }
    if (!support.contains(p.left) || !support.contains(p.right)) {
      throw Error(ErrorCode::PreconditionViolated, "base outside the support");
    }
  }
}

std::optional<LengthVector> IntervalPairSystem::special_lengths() const {
  Rational total = support.length();
  LengthVector out;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = pairs[i];
    if (p.left.lo != support.lo || p.right.hi != support.hi) return std::nullopt;
    out.values[i] = p.left.length() / total;
  }
  if (out.sum() != Rational(1)) return std::nullopt;
  return out;
}

std::optional<Rational> IntervalPairSystem::uncovered_point() const {
  std::vector<Interval> bases;
  for (const auto& p : pairs) {
    bases.push_back(p.left);
    bases.push_back(p.right);
  }
  std::sort(bases.begin(), bases.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  Rational reach = support.lo;
  for (const auto& iv : bases) {
    if (reach < iv.lo) return (reach + iv.lo) / Rational(2);
    if (iv.hi > reach) reach = iv.hi;
  }
  if (reach < support.hi) return (reach + support.hi) / Rational(2);
  return std::nullopt;
}

IntervalPairSystem transmission_right(const IntervalPairSystem& s) {
  for (std::size_t k = 0; k < 3; ++k) {
    const IsometryPair& cover = s.pairs[k];
    if (cover.right.hi != s.support.hi) continue;
    bool covers_all = true;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != k && !cover.right.contains(s.pairs[j].right)) covers_all = false;
    }
    if (!covers_all) continue;
    IntervalPairSystem out = s;
    Rational shift = cover.left.lo - cover.right.lo;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == k) continue;
      out.pairs[j].right = {s.pairs[j].right.lo + shift, s.pairs[j].right.hi + shift};
    }
    return out;
  }
  throw Error(ErrorCode::PreconditionViolated,
              "no right base ending at the support's end contains the other two right bases");
}

ReductionOutcome reduction_right(const IntervalPairSystem& s) {
  const Rational& end = s.support.hi;
  // Which bases cover the right endpoint of the support?
  int covering = 0;
  std::optional<std::size_t> pair_with_end;
  for (std::size_t i = 0; i < 3; ++i) {
    if (s.pairs[i].left.contains(end)) ++covering;
    if (s.pairs[i].right.contains(end)) {
      ++covering;
      if (s.pairs[i].right.hi == end) pair_with_end = i;
    }
  }
  if (covering == 0) return HoleOutcome{};
  if (covering > 1 || !pair_with_end) {
    throw Error(ErrorCode::PreconditionViolated, "the support's end is covered by more than one base");
  }
  const IsometryPair& p = s.pairs[*pair_with_end];

  std::optional<Rational> u;
  for (const auto& q : s.pairs) {
    for (const Rational* x : {&q.left.lo, &q.left.hi, &q.right.lo, &q.right.hi}) {
      if (p.right.lo < *x && *x < p.right.hi && (!u || *u < *x)) u = *x;
    }
  }
  if (!u) return HoleOutcome{};

  IntervalPairSystem out = s;
  out.support.hi = *u;
  out.pairs[*pair_with_end] = {{p.left.lo, p.left.hi - p.right.hi + *u}, {p.right.lo, *u}};
  return out;
}

OrbitGraph explore_orbit(const IntervalPairSystem& s, const Rational& x, long max_word_len) {
  if (!s.support.contains(x)) throw Error(ErrorCode::PointOutsideSupport, x.str());
  OrbitGraph g;
  std::map<Rational, std::size_t> index;
  index.emplace(x, 0);
  g.vertices.push_back(x);

  std::vector<std::size_t> frontier{0};
  for (long depth = 0; depth < max_word_len && !frontier.empty(); ++depth) {
    std::vector<std::size_t> next;
    for (std::size_t v : frontier) {
      const Rational point = g.vertices[v];
      for (int i = 0; i < 3; ++i) {
        const IsometryPair& p = s.pairs[static_cast<std::size_t>(i)];
        for (bool inverse : {false, true}) {
          const Interval& from = inverse ? p.right : p.left;
          const Interval& to = inverse ? p.left : p.right;
          if (!from.contains(point)) continue;
          Rational image = point - from.lo + to.lo;
          auto [it, inserted] = index.emplace(image, g.vertices.size());
          if (inserted) {
            g.vertices.push_back(image);
            next.push_back(it->second);
          }
          g.edges.push_back({v, it->second, Letter(i), inverse});
        }
      }
    }
    frontier = std::move(next);
  }
  return g;
}

}  // namespace rauzy
