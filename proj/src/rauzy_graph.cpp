#include "rauzy/rauzy_graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <sstream>
#include <variant>

#include "rauzy/error.hpp"
#include "rauzy/soi.hpp"

namespace rauzy {

namespace {

// Sorted lengths realizing each elementary outcome.
struct Witness {
  std::array<long, 3> num;
  long den;
};
constexpr std::array<Witness, 4> kWitnesses{{
    {{7, 2, 1}, 10},     // keep
    {{12, 5, 3}, 20},    // swap
    {{11, 5, 4}, 20},    // cycle
    {{8, 7, 5}, 20},     // hole
}};

SpecialSystem system_in_state(const Perm3& p, const Witness& w) {
  LengthVector v;
  for (int pos = 0; pos < 3; ++pos) v[p.at(pos)] = Rational(w.num[static_cast<std::size_t>(pos)], w.den);
  return SpecialSystem::from_lengths(v);
}

}  // namespace

RauzyGraph RauzyGraph::build() {
  RauzyGraph g;
  std::set<Perm3> seen{Perm3::identity()};
  std::deque<Perm3> queue{Perm3::identity()};
  while (!queue.empty()) {
    Perm3 p = queue.front();
    queue.pop_front();
    g.vertices_.push_back(p);
    for (const Witness& w : kWitnesses) {
      StepOutcome out = rauzy_step(system_in_state(p, w));
      if (std::holds_alternative<HoleOutcome>(out)) {
        g.hole_sources_.push_back(p);
        continue;
      }
      const auto& step = std::get<StepContinue>(out);
      IntMatrix m = letter_step_matrix(step.winner);
      g.edges_.push_back({p, step.system.order(), step.winner, step.branch, m, m.transpose()});
      if (seen.insert(step.system.order()).second) queue.push_back(step.system.order());
    }
  }
  std::sort(g.vertices_.begin(), g.vertices_.end());
  std::sort(g.edges_.begin(), g.edges_.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  return g;
}

std::vector<GraphEdge> RauzyGraph::out_edges(const Perm3& from) const {
  std::vector<GraphEdge> out;
  for (const auto& e : edges_)
    if (e.from == from) out.push_back(e);
  return out;
}

bool RauzyGraph::has_edge(const Perm3& from, const Perm3& to) const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [&](const GraphEdge& e) { return e.from == from && e.to == to; });
}

bool RauzyGraph::hole_reachable_from(const Perm3& from) const {
  return std::find(hole_sources_.begin(), hole_sources_.end(), from) != hole_sources_.end();
}

bool RauzyGraph::strongly_connected() const {
  if (vertices_.empty()) return false;
  auto reach = [&](bool reversed) {
    std::set<Perm3> seen{vertices_.front()};
    std::deque<Perm3> queue{vertices_.front()};
    while (!queue.empty()) {
      Perm3 p = queue.front();
      queue.pop_front();
      for (const auto& e : edges_) {
        const Perm3& src = reversed ? e.to : e.from;
        const Perm3& dst = reversed ? e.from : e.to;
        if (src == p && seen.insert(dst).second) queue.push_back(dst);
      }
    }
    return seen.size();
  };
  return reach(false) == vertices_.size() && reach(true) == vertices_.size();
}

// ---------------------------------------------------------------------------

PathEdge PathEdge::make(const Perm3& from, Branch branch, long n) {
  if (n < 1) throw Error(ErrorCode::NonComposablePath, "block counter must be positive");
  return PathEdge{from, from.advance(branch), from.largest(), branch, n};
}

long RauzyPath::elementary_length() const {
  long total = 0;
  for (const auto& e : edges) total += e.n;
  return total;
}

void RauzyPath::validate() const {
  Perm3 at = start;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const PathEdge& e = edges[i];
    if (!(e.from == at)) {
      throw Error(ErrorCode::NonComposablePath, "edge " + std::to_string(i) + " starts at " + e.from.str() +
                                                    " but the path is at " + at.str());
    }
    if (e.n < 1 || !(e.winner == e.from.largest()) || !(e.to == e.from.advance(e.branch))) {
      throw Error(ErrorCode::NonComposablePath, "edge " + std::to_string(i) + " is not a graph edge");
    }
    at = e.to;
  }
}

RauzyPath operator+(const RauzyPath& a, const RauzyPath& b) {
  if (!(a.end() == b.start)) throw Error(ErrorCode::NonComposablePath, "paths do not chain");
  RauzyPath out = a;
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  return out;
}

CocycleMatrix cocycle_block(Letter winner, long n) {
  CocycleMatrix b = CocycleMatrix::identity();
  for (int i = 0; i < 3; ++i)
    if (i != winner.index()) b(i, winner.index()) = n;
  return b;
}

void apply_cocycle_block(CocycleMatrix& b, Letter winner, long n) {
  const int w = winner.index();
  for (int i = 0; i < 3; ++i) {
    if (i == w) continue;
    for (int c = 0; c < 3; ++c) b(i, c) += n * b(w, c);
  }
}

CocycleMatrix cocycle_of(const RauzyPath& path) {
  path.validate();
  CocycleMatrix b = CocycleMatrix::identity();
  for (const auto& e : path.edges) apply_cocycle_block(b, e.winner, e.n);
  return b;
}

CocycleMatrix length_matrix_of(const RauzyPath& path) { return cocycle_of(path).transpose(); }

bool is_complete(const RauzyPath& path) {
  std::array<bool, 3> won{};
  for (const auto& e : path.edges) won[static_cast<std::size_t>(e.winner.index())] = true;
  return won[0] && won[1] && won[2];
}

bool is_positive(const RauzyPath& path) { return cocycle_of(path).all_positive(); }

void for_each_path(const RauzyGraph& g, const Perm3& start, int length,
                   const std::function<void(const RauzyPath&)>& visit) {
  if (length < 0) throw Error(ErrorCode::InvalidArgument, "length must be non-negative");
  RauzyPath path{start, {}};
  std::function<void(int)> rec = [&](int remaining) {
    if (remaining == 0) {
      visit(path);
      return;
    }
    for (const auto& e : g.out_edges(path.end())) {
      path.edges.push_back(PathEdge{e.from, e.to, e.winner, e.branch, 1});
      rec(remaining - 1);
      path.edges.pop_back();
    }
  };
  rec(length);
}

std::vector<RauzyPath> enumerate_paths(const RauzyGraph& g, const Perm3& start, int length) {
  std::vector<RauzyPath> out;
  for_each_path(g, start, length, [&](const RauzyPath& p) { out.push_back(p); });
  return out;
}

CompletePathReport check_complete_paths(const RauzyGraph& g, int max_length) {
  CompletePathReport report;
  report.max_length = max_length;

  // Successor table by rank, so the walk does not rescan the edge list.
  std::array<std::vector<std::pair<int, Letter>>, 6> next;
  for (const auto& e : g.edges()) next[static_cast<std::size_t>(e.from.rank())].push_back({e.to.rank(), e.winner});

  std::vector<CocycleMatrix> stack(static_cast<std::size_t>(max_length) + 1);
  std::function<void(int, int, unsigned)> walk = [&](int state, int depth, unsigned winners) {
    for (const auto& [to, winner] : next[static_cast<std::size_t>(state)]) {
      CocycleMatrix& b = stack[static_cast<std::size_t>(depth) + 1];
      b = stack[static_cast<std::size_t>(depth)];
      apply_cocycle_block(b, winner, 1);
      unsigned won = winners | (1u << winner.index());
      bool complete = won == 7u;
      bool positive = b.all_positive();
      ++report.paths;
      if (complete) ++report.complete;
      if (complete && !positive) ++report.complete_not_positive;
      if (positive && !complete) ++report.positive_not_complete;
      if (depth + 1 < max_length) walk(to, depth + 1, won);
    }
  };
  for (const Perm3& start : g.vertices()) {
    stack[0] = CocycleMatrix::identity();
    walk(start.rank(), 0, 0u);
  }
  return report;
}

std::string to_text(const RauzyGraph& g) {
  std::ostringstream os;
  for (const Perm3& v : g.vertices()) {
    os << v.str() << " ->";
    for (const auto& e : g.out_edges(v)) os << " " << e.to.str() << "[w=" << e.winner.label() << "]";
    if (g.hole_reachable_from(v)) os << " hole";
    os << "\n";
  }
  return os.str();
}

std::string to_dot(const RauzyGraph& g) {
  std::ostringstream os;
  os << "digraph rauzy {\n  hole [shape=box];\n";
  for (const auto& e : g.edges()) {
    os << "  \"" << e.from.str() << "\" -> \"" << e.to.str() << "\" [label=\"" << e.winner.label() << "\"];\n";
  }
  for (const Perm3& v : g.vertices())
    if (g.hole_reachable_from(v)) os << "  \"" << v.str() << "\" -> hole;\n";
  os << "}\n";
  return os.str();
}

}  // namespace rauzy
