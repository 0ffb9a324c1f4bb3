#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rauzy/letters.hpp"
#include "rauzy/matrix.hpp"

namespace rauzy {

struct GraphEdge {
  Perm3 from;
  Perm3 to;
  Letter winner;
  Branch branch;
  IntMatrix length_matrix;  // letter coordinates: old = M * new
  IntMatrix cocycle;        // transpose of length_matrix
};

/// Rauzy graph of the non-accelerated induction. Every vertex also has an
/// outcome into the hole sink, which is not stored as a vertex.
class RauzyGraph {
 public:
  /// Explores the states reachable from (1,2,3) by running rauzy_step on
  /// witness systems for each branch.
  static RauzyGraph build();

  const std::vector<Perm3>& vertices() const { return vertices_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  /// Outgoing edges sorted by target permutation.
  std::vector<GraphEdge> out_edges(const Perm3& from) const;
  bool has_edge(const Perm3& from, const Perm3& to) const;
  bool hole_reachable_from(const Perm3& from) const;
  /// Strong connectivity of the non-hole subgraph.
  bool strongly_connected() const;

 private:
  std::vector<Perm3> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<Perm3> hole_sources_;
};

/// A block of n consecutive wins of `from.largest()`: n-1 Keep steps
/// followed by one step along `branch`.
struct PathEdge {
  Perm3 from;
  Perm3 to;
  Letter winner;
  Branch branch = Branch::Keep;
  long n = 1;

  static PathEdge make(const Perm3& from, Branch branch, long n = 1);
  friend bool operator==(const PathEdge&, const PathEdge&) = default;
};

struct RauzyPath {
  Perm3 start;
  std::vector<PathEdge> edges;

  Perm3 end() const { return edges.empty() ? start : edges.back().to; }
  long elementary_length() const;
  /// Throws NonComposablePath if blocks do not chain or a block is inconsistent.
  void validate() const;

  RauzyPath& append(const PathEdge& e) {
    edges.push_back(e);
    return *this;
  }
  friend RauzyPath operator+(const RauzyPath& a, const RauzyPath& b);
  friend bool operator==(const RauzyPath&, const RauzyPath&) = default;
};

/// Elementary cocycle block B_w^n: column w of B_w is all ones.
CocycleMatrix cocycle_block(Letter winner, long n);
/// Left-multiplies by B_w^n in place: rows other than w gain n times row w.
void apply_cocycle_block(CocycleMatrix& b, Letter winner, long n);

/// B_gamma = B_{e_k} ... B_{e_1}; equals the transpose of the product of length
/// matrices taken in path order.
CocycleMatrix cocycle_of(const RauzyPath& path);
/// Product of letter-coordinate length matrices in path order (= B_gamma^T).
CocycleMatrix length_matrix_of(const RauzyPath& path);

bool is_complete(const RauzyPath& path);
bool is_positive(const RauzyPath& path);

/// All non-hole elementary paths of the given length, lexicographic by
/// successive target permutations.
void for_each_path(const RauzyGraph& g, const Perm3& start, int length,
                   const std::function<void(const RauzyPath&)>& visit);
std::vector<RauzyPath> enumerate_paths(const RauzyGraph& g, const Perm3& start, int length);

struct CompletePathReport {
  int max_length = 0;
  std::uint64_t paths = 0;
  std::uint64_t complete = 0;
  std::uint64_t complete_not_positive = 0;
  std::uint64_t positive_not_complete = 0;
};

/// Exhaustive check over every start state and every path of elementary
/// length 1..max_length.
CompletePathReport check_complete_paths(const RauzyGraph& g, int max_length);

std::string to_text(const RauzyGraph& g);
std::string to_dot(const RauzyGraph& g);

}  // namespace rauzy
