#pragma once

// Special systems of isometries and the Rauzy induction on them, in exact
// rational arithmetic.

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rauzy/letters.hpp"
#include "rauzy/matrix.hpp"
#include "rauzy/rational.hpp"

namespace rauzy {

/// Lengths of the three pairs, indexed by letter. Positive, summing to 1.
struct LengthVector {
  std::array<Rational, 3> values;

  const Rational& operator[](Letter l) const { return values[static_cast<std::size_t>(l.index())]; }
  Rational& operator[](Letter l) { return values[static_cast<std::size_t>(l.index())]; }
  Rational sum() const { return values[0] + values[1] + values[2]; }

  friend bool operator==(const LengthVector&, const LengthVector&) = default;
};

class SpecialSystem {
 public:
  /// Validates and labels a, b, c as letters 1, 2, 3.
  /// Throws NotNormalized, NonPositive or TieEncountered.
  static SpecialSystem make(const Rational& a, const Rational& b, const Rational& c);
  static SpecialSystem from_lengths(const LengthVector& lengths);

  const LengthVector& lengths() const { return lengths_; }
  const Perm3& order() const { return order_; }
  const Rational& length(Letter l) const { return lengths_[l]; }
  /// Length at a sorted position (0 = largest).
  const Rational& sorted(int position) const { return lengths_[order_.at(position)]; }

  friend bool operator==(const SpecialSystem&, const SpecialSystem&) = default;

 private:
  SpecialSystem(LengthVector lengths, Perm3 order) : lengths_(std::move(lengths)), order_(order) {}

  LengthVector lengths_;
  Perm3 order_;
};

struct HoleOutcome {};
struct TieOutcome {
  std::string reason;
};

struct StepContinue {
  SpecialSystem system;  // renormalized
  Letter winner;
  /// Old sorted lengths in terms of new sorted (unnormalized) lengths.
  IntMatrix length_matrix;
  Branch branch;
  /// Total length after the step, before renormalizing.
  Rational scale;
};

using StepOutcome = std::variant<StepContinue, HoleOutcome, TieOutcome>;

struct AcceleratedContinue {
  long n = 0;  // number of elementary wins
  SpecialSystem system;
  Letter winner;
  IntMatrix length_matrix;  // composite, sorted coordinates
  Branch branch;
  Rational scale;
};

struct HoleAfter {
  long k = 0;  // elementary wins completed before the hole
};

using AcceleratedOutcome = std::variant<AcceleratedContinue, HoleAfter, TieOutcome>;

/// Elementary step matrices in sorted coordinates.
IntMatrix step_matrix(Branch branch);
/// Accelerated step matrix with counter n; branch must be Swap or Cycle.
IntMatrix accelerated_matrix(Branch branch, long n);
/// Length matrix in letter coordinates: identity with the winner's row set to ones.
IntMatrix letter_step_matrix(Letter winner);

StepOutcome rauzy_step(const SpecialSystem& s);
AcceleratedOutcome accelerated_step(const SpecialSystem& s);

struct Survived {
  long iterations = 0;
};
struct HoleAt {
  long k = 0;  // 1-based generalized iteration that produced the hole
};
struct TieAt {
  long k = 0;
};
using ThinVerdict = std::variant<Survived, HoleAt, TieAt>;

ThinVerdict classify_thin(const SpecialSystem& s, long max_iters);

// General systems of three interval pairs ------------------------------------

struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Orientation-preserving isometry left -> right, x |-> x - left.lo + right.lo.
struct IsometryPair {
  Interval left;
  Interval right;

  friend bool operator==(const IsometryPair&, const IsometryPair&) = default;
};

struct IntervalPairSystem {
  Interval support;
  std::array<IsometryPair, 3> pairs;

  /// [0,1]; [0,l_i] <-> [1-l_i, 1] for each letter i.
  static IntervalPairSystem from_special(const SpecialSystem& s);

  /// Throws PreconditionViolated if a pair has unequal bases or leaves the support.
  void validate() const;

  /// Lengths scaled to sum 1, when the system has the special shape
  /// (left bases start at the support's left end, right bases end at its right end).
  std::optional<LengthVector> special_lengths() const;

  /// A point of the support covered by no base, if any.
  std::optional<Rational> uncovered_point() const;

  friend bool operator==(const IntervalPairSystem&, const IntervalPairSystem&) = default;
};

IntervalPairSystem transmission_right(const IntervalPairSystem& s);

using ReductionOutcome = std::variant<IntervalPairSystem, HoleOutcome>;
ReductionOutcome reduction_right(const IntervalPairSystem& s);

struct OrbitEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Letter pair;
  bool inverse = false;
};

struct OrbitGraph {
  std::vector<Rational> vertices;  // vertices[0] is the start point
  std::vector<OrbitEdge> edges;
};

/// Breadth-first closure of {x} under the partial isometries and their
/// inverses, using words of length at most max_word_len.
OrbitGraph explore_orbit(const IntervalPairSystem& s, const Rational& x, long max_word_len);

}  // namespace rauzy
