#pragma once

// Path probabilities and cylinder masses, the roof function, and the Monte
// Carlo checks built on them.

#include <cstdint>
#include <random>
#include <optional>
#include <variant>
#include <vector>

#include "rauzy/markov_map.hpp"
#include "rauzy/rational.hpp"
#include "rauzy/rauzy_graph.hpp"
#include "rauzy/soi.hpp"

namespace rauzy {

/// Weights q in letter coordinates, all positive.
using WeightVector = Vec3<Rational>;

/// N(q) / N(B_gamma q), N the product of the entries. Throws InvalidArgument
/// for non-positive weights and NonComposablePath for a broken path.
Rational path_probability(const WeightVector& q, const RauzyPath& path);

/// Lebesgue mass, relative to the ordered cone of path.start, of the points
/// that follow the path and end in the ordered cone of path.end().
Rational cylinder_measure(const RauzyPath& path);
/// Mass of the points that follow the path and then fall in the hole.
Rational hole_measure(const RauzyPath& path);
/// Mass of the points that follow the path and whose next block has at least
/// k >= 1 wins. Throws InvalidArgument for k < 1.
Rational at_least_wins_measure(const RauzyPath& path, long k);

/// Natural logarithm of a positive rational without overflow.
double log_of(const Rational& x);

// Monte Carlo ---------------------------------------------------------------

/// Direction drawn from nu_q: Lebesgue-uniform on the simplex for q = (1,1,1).
Vec3<double> sample_nu(std::mt19937_64& rng, const Vec3<double>& q);

struct KerckhoffResult {
  double T = 0;
  std::size_t samples = 0;
  std::size_t hits = 0;
  double frequency = 0;
  double bound = 0;  // 1/T
  double sigma = 0;  // binomial standard deviation at p = 1/T
  bool pass = false;  // frequency <= bound + 3 sigma
};

/// Fraction of lambda ~ nu_q for which some (B_gamma q)_i exceeds T q_i
/// before the first winner stops winning.
KerckhoffResult mc_kerckhoff(double T, const Vec3<double>& q, std::size_t samples, std::uint64_t seed,
                             unsigned workers = 1);

struct BalanceReport {
  std::vector<double> C;
  std::vector<double> probability;
  std::size_t samples = 0;
  std::size_t holes = 0;   // orbit fell in the hole before completing
  std::size_t capped = 0;  // still incomplete after the step cap
};

/// Along the shortest complete prefix gamma of lambda's induction path,
/// estimates P_q(M(B_gamma q) < C min(m(B_gamma q), M(q))) for each C.
/// Holes and capped runs count as failures.
BalanceReport mc_balance(const std::vector<double>& C_grid, std::size_t samples, std::uint64_t seed,
                         const Vec3<double>& q = {1, 1, 1}, unsigned workers = 1, long step_cap = 100000);

// Roof and first return -----------------------------------------------------

/// -ln of the l1 norm of (B*_gamma)^-1 lambda, lambda normalized to sum 1.
/// Throws OutsideCylinder if lambda does not follow the path.
double roof(const LengthVector& lambda, const RauzyPath& path);
/// Roof of the single accelerated step at p: -ln(na - (n-1)).
double roof(const ChartPoint& p);

/// n = 1 Cycle three times from (1,2,3): complete, positive, closed.
RauzyPath default_loop();

struct ReturnRecord {
  ChartPoint start;
  RauzyPath path;
  ChartPoint return_point;
  double roof_value = 0;
};

struct NoReturn {
  long depth = 0;
  double roof_so_far = 0;
};

using ReturnOutcome = std::variant<ReturnRecord, NoReturn>;

/// First return of p (read in the state loop.start) to the cylinder of the
/// loop, at least |loop| accelerated steps later. Throws PreconditionViolated
/// for an unsuitable loop, OutsideCylinder if p does not follow the loop,
/// Hole or TieEncountered if the orbit ends first.
ReturnOutcome first_return(const ChartPoint& p, const RauzyPath& loop, long depth_cap = 10000);

/// Point of the loop's cylinder drawn from the restriction of Lebesgue measure.
ChartPoint sample_section(std::mt19937_64& rng, const RauzyPath& loop);

struct TailCurve {
  std::vector<double> thresholds;
  /// Estimate of nu{x in section : r(x) >= ln T}; every attempt is a section sample.
  std::vector<double> probabilities;
  std::vector<std::size_t> exceed_counts;
  double fitted_exponent = 0;
  double fit_residual = 0;  // RMS of the log-log residuals
  std::size_t fit_points = 0;
  std::size_t attempts = 0;
  std::size_t returned = 0;
  std::size_t holes = 0;
  std::size_t no_return = 0;
  std::size_t ties = 0;
  /// Relative growth of sum(e^{sigma r} 1{r < ln T}) across the last decade
  /// of T, with sigma = fitted_exponent / 2.
  double partial_sum_growth = 0;
};

/// T = 10^(k/4), k = 1..24.
std::vector<double> default_tail_grid();

struct TailOptions {
  std::size_t returns = 100000;  // first-return samples to collect
  std::vector<double> T_grid = default_tail_grid();
  std::uint64_t seed = 0;
  unsigned workers = 1;
  long depth_cap = 10000;
  std::size_t max_attempts = 1000000000;
};

/// Draws section points until `returns` of them have returned (or the attempt
/// budget runs out). Orbits that fall in the hole never return and do not
/// enter {r >= ln T}; NoReturn runs enter it when their accumulated roof
/// already reaches ln T. The power law is fitted over thresholds exceeded by
/// at least 100 samples but not by all of them (below the loop's own roof
/// every return qualifies).
TailCurve roof_tail(const RauzyPath& loop, const TailOptions& options);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // RMS
};

/// Ordinary least squares; needs at least two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rauzy
