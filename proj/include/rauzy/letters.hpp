#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace rauzy {

/// One of the three interval pairs. Stored 0-based, printed 1-based.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr explicit Letter(int index) : index_(static_cast<std::uint8_t>(index)) {}

  static constexpr Letter from_label(int label) { return Letter(label - 1); }

  constexpr int index() const { return index_; }
  constexpr int label() const { return index_ + 1; }

  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  std::uint8_t index_ = 0;
};

/// How the post-step ordering relates to the pre-step one, listed as
/// positions of the pre-step order from largest to smallest.
///   Keep  -> (1,2,3): the winner is still the largest
///   Swap  -> (2,1,3): the winner drops to the middle
///   Cycle -> (2,3,1): the winner drops to the bottom
enum class Branch : std::uint8_t { Keep = 0, Swap = 1, Cycle = 2 };

const char* to_string(Branch b);
std::array<int, 3> relative_order(Branch b);

/// Ordering of letters from the largest length to the smallest.
struct Perm3 {
  std::array<Letter, 3> order{Letter(0), Letter(1), Letter(2)};

  static Perm3 identity() { return {}; }
  static Perm3 from_labels(int i, int j, int k);
  /// Parses "(1,2,3)" or "1,2,3".
  static Perm3 parse(const std::string& text);

  bool valid() const;
  Letter largest() const { return order[0]; }
  Letter at(int position) const { return order[static_cast<std::size_t>(position)]; }

  /// State after one elementary step along the given branch.
  Perm3 advance(Branch b) const;

  /// Dense index in [0, 6) following lexicographic order of labels.
  int rank() const;
  static Perm3 unrank(int r);

  std::string str() const;

  friend auto operator<=>(const Perm3&, const Perm3&) = default;
};

}  // namespace rauzy
