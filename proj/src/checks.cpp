#include "rauzy/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <variant>

#include "rauzy/error.hpp"
#include "rauzy/markov_map.hpp"
#include "rauzy/random.hpp"
#include "rauzy/soi.hpp"

namespace rauzy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEdgeMargin = 1e-9;

// Uniform point of the chart triangle, away from its edges by kEdgeMargin.
ChartPoint chart_sample(std::mt19937_64& rng, bool hole_region) {
  for (;;) {
    double x = uniform01(rng), y = uniform01(rng);
    double lo = std::min(x, y), hi = std::max(x, y);
    double v[3] = {lo, hi - lo, 1.0 - hi};
    std::sort(v, v + 3, std::greater<>());
    if (v[0] - v[1] <= kEdgeMargin || v[1] - v[2] <= kEdgeMargin || v[2] <= kEdgeMargin) continue;
    if (hole_region && !(v[0] < 0.5 - kEdgeMargin)) continue;
    return ChartPoint{v[0], v[1], std::nullopt};
  }
}

MarkovCell cell_sample(std::mt19937_64& rng, long max_n) {
  long n = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(max_n));
  auto br = static_cast<Branch>(rng() % 3);
  return MarkovCell{n, br};
}

// Block b covers samples [b * kBlockSize, ...).
std::size_t block_size_of(std::size_t total, std::size_t b) {
  return std::min(kBlockSize, total - b * kBlockSize);
}

template <class Part, class Body>
std::vector<Part> run_blocks(std::size_t total, unsigned workers, Body&& body) {
  std::vector<Part> parts(block_count(total));
  for_each_block(parts.size(), workers, [&](std::size_t b) { parts[b] = body(b, block_size_of(total, b)); });
  return parts;
}

SpecialSystem random_exact_system(std::mt19937_64& rng) {
  constexpr std::uint64_t kMax = 1000000;
  for (;;) {
    long p = 1 + static_cast<long>(rng() % kMax), q = 1 + static_cast<long>(rng() % kMax),
         r = 1 + static_cast<long>(rng() % kMax);
    if (p == q || q == r || p == r) continue;
    long t = p + q + r;
    return SpecialSystem::make(Rational(p, t), Rational(q, t), Rational(r, t));
  }
}

}  // namespace

PositivityCheck check_positivity(int max_length) {
  auto start = std::chrono::steady_clock::now();
  PositivityCheck out;
  out.report = check_complete_paths(RauzyGraph::build(), max_length);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.pass = out.report.complete_not_positive == 0 && out.report.complete > 0;
  return out;
}

ExpansionCheck check_expansion(std::size_t samples, std::uint64_t seed, unsigned workers, long max_n) {
  if (max_n < 1) throw Error(ErrorCode::InvalidArgument, "max_n must be at least 1");
  struct Part {
    std::size_t exceptions = 0, mismatches = 0;
    double lower = kInf, upper = kInf;
  };
  const double floor_j = 64.0 / 27.0;
  auto parts = run_blocks<Part>(samples, workers, [&](std::size_t b, std::size_t count) {
    auto rng = block_rng(seed, b);
    Part part;
    for (std::size_t i = 0; i < count; ++i) {
      MarkovCell c = cell_sample(rng, max_n);
      ChartPoint p = inverse_branch(c, chart_sample(rng, c.branch == Branch::Keep));
      auto got = cell_of(p);
      const auto* cell = std::get_if<MarkovCell>(&got);
      if (!cell) {
        ++part.exceptions;
        continue;
      }
      if (*cell != c) ++part.mismatches;
      double j = jacobian(p);
      double top = std::pow(static_cast<double>(cell->n) + 1, 3);
      if (!(j > floor_j && j < top)) ++part.exceptions;
      part.lower = std::min(part.lower, j / floor_j);
      part.upper = std::min(part.upper, top / j);
    }
    return part;
  });
  ExpansionCheck out;
  out.samples = samples;
  out.max_n = max_n;
  out.min_lower_ratio = out.min_upper_ratio = kInf;
  for (const auto& p : parts) {
    out.exceptions += p.exceptions;
    out.cell_mismatches += p.mismatches;
    out.min_lower_ratio = std::min(out.min_lower_ratio, p.lower);
    out.min_upper_ratio = std::min(out.min_upper_ratio, p.upper);
  }
  out.pass = out.exceptions == 0;
  return out;
}

DistortionCheck check_distortion(std::size_t pairs, std::uint64_t seed, unsigned workers, long max_n,
                                 double constant) {
  if (max_n < 1) throw Error(ErrorCode::InvalidArgument, "max_n must be at least 1");
  struct Part {
    std::size_t exceptions = 0;
    double worst = 0;
  };
  auto parts = run_blocks<Part>(pairs, workers, [&](std::size_t b, std::size_t count) {
    auto rng = block_rng(seed, b);
    Part part;
    for (std::size_t i = 0; i < count; ++i) {
      MarkovCell c = cell_sample(rng, max_n);
      bool keep = c.branch == Branch::Keep;
      ChartPoint q1 = chart_sample(rng, keep), q2 = chart_sample(rng, keep);
      ChartPoint p1 = inverse_branch(c, q1), p2 = inverse_branch(c, q2);
      double d = chart_distance(q1, q2);
      if (d == 0) continue;
      double ratio = std::abs(jacobian(p1) / jacobian(p2) - 1.0) / d;
      if (!(ratio <= constant)) ++part.exceptions;
      part.worst = std::max(part.worst, ratio);
    }
    return part;
  });
  DistortionCheck out;
  out.pairs = pairs;
  out.max_n = max_n;
  out.constant = constant;
  for (const auto& p : parts) {
    out.exceptions += p.exceptions;
    out.worst_ratio = std::max(out.worst_ratio, p.worst);
  }
  out.pass = out.exceptions == 0;
  return out;
}

RoofJacobianCheck check_roof_jacobian(std::size_t steps, std::uint64_t seed, unsigned workers) {
  struct Part {
    std::size_t exceptions = 0;
    double worst = 0;
  };
  RoofJacobianCheck out;
  out.steps = steps;
  auto parts = run_blocks<Part>(steps, workers, [&](std::size_t b, std::size_t count) {
    auto rng = block_rng(seed, b);
    Part part;
    for (std::size_t done = 0; done < count;) {
      SpecialSystem s = random_exact_system(rng);
      if (!(s.sorted(0) > Rational(1, 2))) continue;
      auto acc = accelerated_step(s);
      const auto* c = std::get_if<AcceleratedContinue>(&acc);
      if (!c) continue;
      RauzyPath path{s.order(), {PathEdge::make(s.order(), c->branch, c->n)}};
      double r = roof(s.lengths(), path);
      double j = jacobian(ChartPoint::make_exact(s.sorted(0), s.sorted(1)));
      double err = std::abs(std::exp(3 * r) / j - 1);
      if (!(err < out.tolerance)) ++part.exceptions;
      part.worst = std::max(part.worst, err);
      ++done;
    }
    return part;
  });
  for (const auto& p : parts) {
    out.exceptions += p.exceptions;
    out.worst_relative_error = std::max(out.worst_relative_error, p.worst);
  }
  out.pass = out.exceptions == 0;
  return out;
}

KerckhoffCheck check_kerckhoff(const std::vector<double>& T_grid, std::size_t samples, std::uint64_t seed,
                               unsigned workers) {
  KerckhoffCheck out;
  out.pass = !T_grid.empty();
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    out.results.push_back(mc_kerckhoff(T_grid[i], {1, 1, 1}, samples, mix_seed(seed, i), workers));
    out.pass = out.pass && out.results.back().pass;
  }
  return out;
}

PartitionCheck check_partition(long ncap1, long ncap2) {
  PartitionCheck out;
  out.pass = true;
  int depth = 1;
  for (long ncap : {ncap1, ncap2}) {
    PartitionLevel level;
    level.depth = depth;
    level.ncap = ncap;
    std::vector<Rational> cells, holes, rest;
    EnumerationOptions o;
    o.depth = depth;
    o.ncap = ncap;
    enumerate_cylinders(o, [&](const Cylinder& c) {
      switch (c.kind) {
        case CylinderKind::Cell: cells.push_back(c.measure); break;
        case CylinderKind::Hole: holes.push_back(c.measure); break;
        case CylinderKind::Remainder: rest.push_back(c.measure); break;
      }
    });
    level.cells = cells.size();
    level.cell_mass = exact_sum(cells);
    level.hole_mass = exact_sum(holes);
    level.remainder_mass = exact_sum(rest);
    level.total = level.cell_mass + level.hole_mass + level.remainder_mass;
    level.pass = level.total == Rational(1);
    out.pass = out.pass && level.pass;
    out.levels.push_back(level);
    ++depth;
  }
  SurvivorOptions so;
  so.ncap = ncap1;
  out.depth1 = survivor_mass(1, so);
  out.contains_three_quarters = out.depth1.lower <= Rational(3, 4) && Rational(3, 4) <= out.depth1.upper;
  out.pass = out.pass && out.contains_three_quarters;
  return out;
}

}  // namespace rauzy
