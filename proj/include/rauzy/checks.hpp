#pragma once

// Invariant suites shared by the CLI `verify` command and the acceptance run.
// Every sampled suite splits its work into seeded blocks, so reports do not
// depend on the worker count.

#include <cstdint>
#include <vector>

#include "rauzy/dimension.hpp"
#include "rauzy/measure.hpp"
#include "rauzy/rauzy_graph.hpp"

namespace rauzy {

struct PositivityCheck {
  CompletePathReport report;
  double seconds = 0;
  bool pass = false;
};

/// Every complete path of elementary length <= max_length is positive.
PositivityCheck check_positivity(int max_length = 12);

struct ExpansionCheck {
  std::size_t samples = 0;
  long max_n = 100;
  std::size_t exceptions = 0;
  std::size_t cell_mismatches = 0;  // cell_of disagreed with the cell the point was drawn from
  double min_lower_ratio = 0;       // min |DT| / (4/3)^3
  double min_upper_ratio = 0;       // min (n+1)^3 / |DT|
  bool pass = false;
};

/// (4/3)^3 < |DT| < (n+1)^3 on points drawn uniformly from cells picked
/// uniformly among n <= max_n and the three branches.
ExpansionCheck check_expansion(std::size_t samples, std::uint64_t seed, unsigned workers = 1, long max_n = 100);

struct DistortionCheck {
  std::size_t pairs = 0;
  long max_n = 100;
  double constant = 36;
  std::size_t exceptions = 0;
  double worst_ratio = 0;  // max |J(p1)/J(p2) - 1| / dist(T p1, T p2)
  bool pass = false;
};

DistortionCheck check_distortion(std::size_t pairs, std::uint64_t seed, unsigned workers = 1, long max_n = 100,
                                 double constant = 36);

struct RoofJacobianCheck {
  std::size_t steps = 0;
  double tolerance = 1e-9;
  std::size_t exceptions = 0;
  double worst_relative_error = 0;
  bool pass = false;
};

/// e^{3r} = |DT| on random exact non-hole systems, one accelerated step each.
RoofJacobianCheck check_roof_jacobian(std::size_t steps, std::uint64_t seed, unsigned workers = 1);

struct KerckhoffCheck {
  std::vector<KerckhoffResult> results;
  bool pass = false;
};

KerckhoffCheck check_kerckhoff(const std::vector<double>& T_grid, std::size_t samples, std::uint64_t seed,
                               unsigned workers = 1);

struct PartitionLevel {
  int depth = 0;
  long ncap = 0;
  std::size_t cells = 0;
  Rational cell_mass;
  Rational hole_mass;
  Rational remainder_mass;
  Rational total;
  bool pass = false;
};

struct PartitionCheck {
  std::vector<PartitionLevel> levels;
  MassBracket depth1;
  bool contains_three_quarters = false;
  bool pass = false;
};

/// Exact Cell + Hole + Remainder sums at depths 1 and 2, and the fast
/// depth-one bracket against 3/4.
PartitionCheck check_partition(long ncap1 = 64, long ncap2 = 16);

}  // namespace rauzy
