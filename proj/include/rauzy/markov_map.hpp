#pragma once

// The accelerated map T on the ordered simplex {a > b > c > 0, a+b+c = 1},
// written in the (a, b) chart.

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rauzy/letters.hpp"
#include "rauzy/matrix.hpp"
#include "rauzy/rational.hpp"
#include "rauzy/soi.hpp"

namespace rauzy {

inline constexpr double kBoundaryTolerance = 1e-14;

struct ExactChartPoint {
  Rational a;
  Rational b;

  Rational c() const { return Rational(1) - a - b; }
  friend bool operator==(const ExactChartPoint&, const ExactChartPoint&) = default;
};

struct ChartPoint {
  double a = 0;
  double b = 0;
  /// Exact coordinates when known; classification near boundaries defers to them.
  std::optional<ExactChartPoint> exact;

  double c() const { return 1.0 - a - b; }

  /// Float point; throws InvalidArgument unless a > b > c > 0.
  static ChartPoint make(double a, double b);
  /// Exact point with its float approximation; throws InvalidArgument unless a > b > c > 0.
  static ChartPoint make_exact(const Rational& a, const Rational& b);

  bool in_chart() const;
};

/// Euclidean distance in the (a, b) chart.
double chart_distance(const ChartPoint& p, const ChartPoint& q);

/// A Markov cell: n consecutive wins of the largest letter, after which the
/// winner drops to the middle (Swap) or the bottom (Cycle), or stays on top
/// with the next step landing in the hole (Keep).
struct MarkovCell {
  long n = 1;
  Branch branch = Branch::Swap;

  friend auto operator<=>(const MarkovCell&, const MarkovCell&) = default;
};

using CellOutcome = std::variant<MarkovCell, HoleOutcome, TieOutcome>;

struct MapImage {
  ChartPoint point;
  MarkovCell cell;
  /// Total length after the step, na - (n-1); the image is the lengths divided by it.
  double denominator = 1;
};

using MapOutcome = std::variant<MapImage, HoleOutcome, TieOutcome>;

CellOutcome cell_of(const ChartPoint& p);
CellOutcome cell_of(const ExactChartPoint& p);

MapOutcome apply_T(const ChartPoint& p);

/// b/(na-(n-1)), ((n+1)a-n)/(na-(n-1)) with n from cell_of, whatever the branch.
/// This is the sorted image only on Swap cells. Throws Hole or TieEncountered.
ChartPoint swap_branch_image(const ChartPoint& p);

/// (na-(n-1))^-3. Throws Hole or TieEncountered.
double jacobian(const ChartPoint& p);

/// Vertices of the Swap cell with counter n, exact. Throws InvalidArgument if n < 1.
std::array<ChartPoint, 3> cell_vertices(long n);
/// Vertices of any cell, exact.
std::array<ChartPoint, 3> cell_vertices(const MarkovCell& cell);

/// Old sorted lengths in terms of the new sorted lengths on a cell.
IntMatrix cell_matrix(const MarkovCell& cell);

/// The point of `cell` that T sends to p. Swap and Cycle cells map onto the
/// whole chart; Keep cells map onto the hole region a < 1/2 and throw
/// PreconditionViolated outside it. Exact when p is.
ChartPoint inverse_branch(const MarkovCell& cell, const ChartPoint& p);

struct ChaosGameOptions {
  std::size_t count = 1;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
  std::optional<std::array<double, 3>> weights;
  unsigned workers = 1;
  /// Also iterate in exact arithmetic and attach shadows (slow; for checks).
  bool exact = false;
};

/// Random iteration of the three elementary inverse branches on the full
/// simplex, starting at the barycenter in every block. Points come back sorted
/// into the chart. Output is a function of (count, burn_in, seed, weights) only.
std::vector<ChartPoint> chaos_game(const ChaosGameOptions& options);

/// Same orbit as chaos_game, unsorted barycentric coordinates.
std::vector<std::array<double, 3>> chaos_game_simplex(const ChaosGameOptions& options);

}  // namespace rauzy
