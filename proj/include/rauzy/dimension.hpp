#pragma once

// Cylinder enumeration, surviving mass, decay exponents and box counting.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rauzy/measure.hpp"
#include "rauzy/rational.hpp"
#include "rauzy/rauzy_graph.hpp"

namespace rauzy {

enum class CylinderKind {
  Cell,       // `path` names depth cells of T; the last one may be a Keep cell
  Hole,       // points that follow `path` and then fall in the hole
  Remainder,  // unresolved mass under `path`: counters above the cap or below the floor
};

const char* to_string(CylinderKind kind);

struct Cylinder {
  CylinderKind kind = CylinderKind::Cell;
  RauzyPath path;  // accelerated blocks, starting at (1,2,3)
  CocycleMatrix cocycle;
  Rational measure;
  bool survives = true;  // false for Hole; Remainder survival is unknown and reported as false
};

struct EnumerationOptions {
  int depth = 1;
  Rational measure_floor{0};
  long ncap = 64;
};

/// Depth-first walk over the accelerated cylinders of the given depth, in
/// canonical order (counter, then Swap, Cycle, Keep). Hole and Remainder
/// records are emitted where they arise. Remainder masses come from closed
/// forms, so Cell + Hole + Remainder = 1 is a genuine check.
void enumerate_cylinders(const EnumerationOptions& options, const std::function<void(const Cylinder&)>& visit);

/// Mass of the symbolic cylinder: cylinder_measure, or for a path ending in a
/// Keep block, the Keep cell (the points that fall in the hole right after).
Rational symbolic_measure(const RauzyPath& path);

/// Sum of many rationals by pairwise reduction.
Rational exact_sum(std::vector<Rational> terms);

struct MassBracket {
  Rational lower;
  Rational upper;

  double midpoint() const { return ((lower + upper) / Rational(2)).to_double(); }
  double width() const { return (upper - lower).to_double(); }
};

struct SurvivorOptions {
  double measure_floor = 1e-12;
  long ncap = 64;
  /// Count hole mass as surviving (sanity mode; the mass is then 1 at every depth).
  bool holes_survive = false;
  unsigned workers = 1;
};

/// Brackets of mu(X_n) for n = 0..max_depth. Bounds are exact dyadic rationals
/// obtained with directed rounding; truncated mass only widens the upper bound.
std::vector<MassBracket> survivor_masses(int max_depth, const SurvivorOptions& options);
MassBracket survivor_mass(int depth, const SurvivorOptions& options);

struct DeltaEstimate {
  double delta = 0;
  double residual = 0;
  std::vector<double> midpoints;  // mu(X_n), n = 0..max_depth
  std::vector<double> widths;
  double relative_width = 0;      // width / midpoint at max_depth
  double previous_delta = 0;      // same fit with max_depth - 1 (when max_depth >= 4)
};

/// Least-squares slope of -ln mu(X_n) over n = 2..max_depth, on bracket
/// midpoints. Throws BracketTooWide when width/midpoint > max_relative_width
/// at max_depth, InvalidArgument when max_depth < 3.
DeltaEstimate delta_estimate(int max_depth, const SurvivorOptions& options, double max_relative_width = 0.2);
DeltaEstimate delta_from_brackets(const std::vector<MassBracket>& brackets, double max_relative_width = 0.2);

struct FastDecayEstimate {
  double alpha1 = 0;
  double residual = 0;
  std::vector<double> eps;
  std::vector<double> S;
  double enumerated_mass = 0;  // S(1) without the truncated tail
  double tail_mass = 0;        // mass beyond the counter cap, folded into S(eps) for eps above its cells
  double unresolved_mass = 0;  // below the floor at inner levels; left out of S
};

/// S(eps) = mass of depth-`depth` cells of measure <= eps; slope of log S
/// against log eps.
FastDecayEstimate fast_decay_estimate(int depth, const std::vector<double>& eps_grid, long ncap,
                                      double measure_floor = 0);

struct BoxCount {
  double dimension = 0;
  double residual = 0;
  std::vector<double> sizes;
  std::vector<std::size_t> boxes;
};

/// Box-counting slope on a dyadic grid anchored at [0,1]^2; sizes must be
/// powers of two in (0, 1]. A point on a box boundary belongs to the lower box.
/// One distinct point gives 0; otherwise DegenerateCloud if the cloud meets
/// fewer than two boxes at the coarsest size.
BoxCount box_counting(const std::vector<std::array<double, 2>>& points, const std::vector<double>& sizes);

/// 2 - min(delta, alpha1). Throws NonPositiveInput.
double ad_bound(double delta_hat, double alpha1_hat);

struct DimensionConfig {
  int depth = 8;
  long ncap = 64;
  double measure_floor = 1e-12;
  int alpha_depth = 1;
  long alpha_ncap = 16384;
  std::vector<double> eps_grid;  // empty: 10^-7 .. 10^-3, four points per decade
  std::size_t points = 1000000;
  std::size_t burn_in = 1000;
  std::vector<double> box_sizes;  // empty: 2^-4 .. 2^-9
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct DimensionReport {
  DeltaEstimate delta;
  std::vector<MassBracket> brackets;
  FastDecayEstimate alpha1;
  BoxCount box;
  double ad_bound = 0;
  DimensionConfig config;
};

std::vector<double> default_eps_grid();
std::vector<double> default_box_sizes();

/// Below depth 3 there is nothing to fit: delta stays empty and ad_bound is NaN.
DimensionReport run_dimension(const DimensionConfig& config);

}  // namespace rauzy
