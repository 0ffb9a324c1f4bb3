#include "rauzy/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rauzy/error.hpp"
#include "rauzy/markov_map.hpp"
#include "rauzy/random.hpp"

namespace rauzy {

const char* to_string(CylinderKind kind) {
  switch (kind) {
    case CylinderKind::Cell: return "cell";
    case CylinderKind::Hole: return "hole";
    case CylinderKind::Remainder: return "remainder";
  }
  return "?";
}

Rational symbolic_measure(const RauzyPath& path) {
  if (!path.edges.empty() && path.edges.back().branch == Branch::Keep) return hole_measure(path);
  return cylinder_measure(path);
}

Rational exact_sum(std::vector<Rational> terms) {
  if (terms.empty()) return Rational(0);
  while (terms.size() > 1) {
    std::size_t half = (terms.size() + 1) / 2;
    for (std::size_t i = 0; i < terms.size() / 2; ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
    if (terms.size() % 2 == 1) terms[terms.size() / 2] = terms.back();
    terms.resize(half);
  }
  return terms[0];
}

// Exact enumeration ----------------------------------------------------------

namespace {

struct ExactNode {
  RauzyPath path;
  CocycleMatrix cocycle;
};

Vec3<BigInt> row_sums(const CocycleMatrix& b) { return b * Vec3<BigInt>{1, 1, 1}; }

Rational cone_mass(const Vec3<BigInt>& w, const Perm3& order) {
  const BigInt& top = w[static_cast<std::size_t>(order.at(0).index())];
  BigInt two = top + w[static_cast<std::size_t>(order.at(1).index())];
  BigInt all = w[0] + w[1] + w[2];
  return Rational(BigInt(6), top * two * all);
}

Rational hole_mass(const Vec3<BigInt>& w, const Perm3& order) {
  const BigInt& top = w[static_cast<std::size_t>(order.at(0).index())];
  BigInt two = top + w[static_cast<std::size_t>(order.at(1).index())];
  BigInt all = w[0] + w[1] + w[2];
  return Rational(BigInt(6), two * all * (all + top));
}

class ExactEnumerator {
 public:
  ExactEnumerator(const EnumerationOptions& o, const std::function<void(const Cylinder&)>& visit)
      : o_(o), visit_(visit) {}

  void run() {
    ExactNode root{RauzyPath{Perm3::identity(), {}}, CocycleMatrix::identity()};
    descend(root, 0);
  }

 private:
  void emit(CylinderKind kind, const RauzyPath& path, const CocycleMatrix& b, Rational measure, bool survives) {
    visit_(Cylinder{kind, path, b, std::move(measure), survives});
  }

  void descend(const ExactNode& node, int level) {
    const Perm3 order = node.path.end();
    const Letter top = order.largest();
    emit(CylinderKind::Hole, node.path, node.cocycle, hole_mass(row_sums(node.cocycle), order), false);
    std::vector<Rational> pruned;
    const bool last = level + 1 == o_.depth;
    for (long n = 1; n <= o_.ncap; ++n) {
      CocycleMatrix b = node.cocycle;
      apply_cocycle_block(b, top, n);
      Vec3<BigInt> w = row_sums(b);
      for (Branch br : {Branch::Swap, Branch::Cycle, Branch::Keep}) {
        RauzyPath path = node.path;
        path.append(PathEdge::make(order, br, n));
        Rational m = br == Branch::Keep ? hole_mass(w, order) : cone_mass(w, path.end());
        if (m < o_.measure_floor) {
          pruned.push_back(std::move(m));
          continue;
        }
        if (last) {
          emit(CylinderKind::Cell, path, b, std::move(m), true);
        } else if (br == Branch::Keep) {
          // A Keep cell is followed by the hole at the next level.
          emit(CylinderKind::Hole, path, b, std::move(m), false);
        } else {
          descend(ExactNode{path, b}, level + 1);
        }
      }
    }
    pruned.push_back(at_least_wins_measure(node.path, o_.ncap + 1));
    Rational rest = exact_sum(std::move(pruned));
    if (rest.is_positive()) emit(CylinderKind::Remainder, node.path, node.cocycle, std::move(rest), false);
  }

  const EnumerationOptions& o_;
  const std::function<void(const Cylinder&)>& visit_;
};

}  // namespace

void enumerate_cylinders(const EnumerationOptions& options, const std::function<void(const Cylinder&)>& visit) {
  if (options.depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be at least 1");
  if (options.measure_floor.sign() < 0) throw Error(ErrorCode::InvalidArgument, "measure floor must be non-negative");
  if (options.ncap < 1) throw Error(ErrorCode::InvalidArgument, "counter cap must be at least 1");
  ExactEnumerator(options, visit).run();
}

// Fast surviving-mass brackets ------------------------------------------------

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

// Masses are accumulated as multiples of 2^-64, rounded down for lower
// bounds and up for upper bounds.
constexpr int kScaleBits = 64;
const u128 kSix = static_cast<u128>(6) << kScaleBits;
// Denominators above this are treated as below any floor.
const u128 kMaxDen = static_cast<u128>(1) << 100;

inline u128 floor_mass(u128 den) { return kSix / den; }
inline u128 ceil_mass(u128 den) { return (kSix + den - 1) / den; }

struct FastNode {
  std::array<std::int64_t, 3> w;
  std::array<std::uint8_t, 3> order;  // letters from largest to smallest
};

struct Dens {
  u128 cone;
  u128 hole;
  bool ok;
};

Dens dens_of(const FastNode& x) {
  u128 top = static_cast<u128>(x.w[x.order[0]]);
  u128 two = top + static_cast<u128>(x.w[x.order[1]]);
  u128 all = static_cast<u128>(x.w[0]) + static_cast<u128>(x.w[1]) + static_cast<u128>(x.w[2]);
  Dens d{0, 0, false};
  if (all > (static_cast<u128>(1) << 40)) return d;  // products would leave the safe range
  d.cone = top * two * all;
  d.hole = two * all * (all + top);
  d.ok = d.cone < kMaxDen && d.hole < kMaxDen;
  return d;
}

FastNode child_of(const FastNode& x, long n, Branch br, bool& ok) {
  FastNode c = x;
  std::uint8_t L = x.order[0];
  i128 wl = x.w[L];
  ok = true;
  for (std::uint8_t i = 0; i < 3; ++i) {
    if (i == L) continue;
    i128 v = static_cast<i128>(x.w[i]) + static_cast<i128>(n) * wl;
    if (v > std::numeric_limits<std::int64_t>::max()) ok = false;
    c.w[i] = static_cast<std::int64_t>(v);
  }
  if (br != Branch::Keep) {
    auto rel = relative_order(br);
    for (std::size_t i = 0; i < 3; ++i) c.order[i] = x.order[static_cast<std::size_t>(rel[i] - 1)];
  }
  return c;
}

inline double as_mass(u128 den) { return 6.0 / static_cast<double>(den); }

struct Accumulator {
  std::vector<u128> lower;
  std::vector<u128> upper;

  explicit Accumulator(int depth) : lower(static_cast<std::size_t>(depth) + 1, 0), upper(lower) {}
};

// mu(X_d) is the non-hole mass of the Swap/Cycle nodes at level d-1. Mass that
// the walk does not resolve below a node at level j may survive to any depth
// from j+2 on, so it is added to those upper bounds.
class SurvivorWalker {
 public:
  SurvivorWalker(int max_depth, const SurvivorOptions& o, Accumulator& acc) : D_(max_depth), o_(o), acc_(acc) {}

  template <class Fn>
  void for_each_child(const FastNode& x, Fn&& fn) const {
    for (long n = 1; n <= o_.ncap; ++n) {
      bool any = false;
      for (Branch br : {Branch::Swap, Branch::Cycle, Branch::Keep}) {
        bool ok = false;
        FastNode c = child_of(x, n, br, ok);
        if (!ok) continue;
        Dens cd = dens_of(c);
        if (!cd.ok) continue;
        u128 den = br == Branch::Keep ? cd.hole : cd.cone;
        if (as_mass(den) < o_.measure_floor) continue;
        any = true;
        fn(c, br, cd);
      }
      if (!any) break;  // masses decrease with n
    }
  }

  void visit(const FastNode& x, int level, const Dens& d) {
    u128 m_lo = floor_mass(d.cone), m_hi = ceil_mass(d.cone);
    u128 h_lo = floor_mass(d.hole), h_hi = ceil_mass(d.hole);
    auto at = [](std::vector<u128>& v, int k) -> u128& { return v[static_cast<std::size_t>(k)]; };
    if (level + 1 <= D_) {
      at(acc_.lower, level + 1) += m_lo - h_hi;
      at(acc_.upper, level + 1) += m_hi - h_lo;
    }
    if (level + 2 > D_) return;
    u128 resolved = h_lo;
    for_each_child(x, [&](const FastNode& c, Branch br, const Dens& cd) {
      if (br == Branch::Keep) {
        resolved += floor_mass(cd.hole);
      } else {
        resolved += floor_mass(cd.cone);
        visit(c, level + 1, cd);
      }
    });
    u128 unresolved = m_hi > resolved ? m_hi - resolved : 0;
    for (int k = level + 2; k <= D_; ++k) at(acc_.upper, k) += unresolved;
  }

  // Root bookkeeping for the parallel split: the root's own terms and its
  // Swap/Cycle children, which become independent tasks.
  std::vector<std::pair<FastNode, Dens>> visit_root(const FastNode& root, const Dens& d) {
    std::vector<std::pair<FastNode, Dens>> tasks;
    u128 m_hi = ceil_mass(d.cone);
    auto at = [](std::vector<u128>& v, int k) -> u128& { return v[static_cast<std::size_t>(k)]; };
    if (D_ >= 1) {
      at(acc_.lower, 1) += floor_mass(d.cone) - ceil_mass(d.hole);
      at(acc_.upper, 1) += m_hi - floor_mass(d.hole);
    }
    if (D_ < 2) return tasks;
    u128 resolved = floor_mass(d.hole);
    for_each_child(root, [&](const FastNode& c, Branch br, const Dens& cd) {
      if (br == Branch::Keep) {
        resolved += floor_mass(cd.hole);
      } else {
        resolved += floor_mass(cd.cone);
        tasks.emplace_back(c, cd);
      }
    });
    u128 unresolved = m_hi > resolved ? m_hi - resolved : 0;
    for (int k = 2; k <= D_; ++k) at(acc_.upper, k) += unresolved;
    return tasks;
  }

 private:
  int D_;
  const SurvivorOptions& o_;
  Accumulator& acc_;
};

Rational dyadic(u128 v) {
  BigInt num(static_cast<unsigned long>(v >> 64));
  num <<= 64;
  num += static_cast<unsigned long>(v & ~static_cast<std::uint64_t>(0));
  BigInt den(1);
  den <<= kScaleBits;
  return Rational(num, den);
}

}  // namespace

std::vector<MassBracket> survivor_masses(int max_depth, const SurvivorOptions& o) {
  if (max_depth < 0) throw Error(ErrorCode::InvalidArgument, "depth must be non-negative");
  if (o.ncap < 1) throw Error(ErrorCode::InvalidArgument, "counter cap must be at least 1");
  if (!(o.measure_floor >= 0)) throw Error(ErrorCode::InvalidArgument, "measure floor must be non-negative");
  if (o.holes_survive) return std::vector<MassBracket>(static_cast<std::size_t>(max_depth) + 1, MassBracket{1, 1});

  Accumulator root_acc(max_depth);
  SurvivorWalker root_walker(max_depth, o, root_acc);
  FastNode root{{1, 1, 1}, {0, 1, 2}};
  auto tasks = root_walker.visit_root(root, dens_of(root));
  std::vector<Accumulator> accs(tasks.size(), Accumulator(max_depth));
  for_each_block(tasks.size(), o.workers, [&](std::size_t i) {
    SurvivorWalker w(max_depth, o, accs[i]);
    w.visit(tasks[i].first, 1, tasks[i].second);
  });
  for (const auto& a : accs) {
    for (std::size_t k = 0; k < a.lower.size(); ++k) {
      root_acc.lower[k] += a.lower[k];
      root_acc.upper[k] += a.upper[k];
    }
  }
  std::vector<MassBracket> out;
  out.push_back(MassBracket{1, 1});
  for (int k = 1; k <= max_depth; ++k) {
    Rational lo = dyadic(root_acc.lower[static_cast<std::size_t>(k)]);
    Rational hi = dyadic(root_acc.upper[static_cast<std::size_t>(k)]);
    out.push_back(MassBracket{lo, std::min(hi, Rational(1))});
  }
  return out;
}

MassBracket survivor_mass(int depth, const SurvivorOptions& options) { return survivor_masses(depth, options).back(); }

DeltaEstimate delta_from_brackets(const std::vector<MassBracket>& brackets, double max_relative_width) {
  int D = static_cast<int>(brackets.size()) - 1;
  if (D < 3) throw Error(ErrorCode::InvalidArgument, "delta needs max_depth >= 3");
  DeltaEstimate est;
  for (const auto& b : brackets) {
    est.midpoints.push_back(b.midpoint());
    est.widths.push_back(b.width());
  }
  est.relative_width = est.widths.back() / est.midpoints.back();
  if (!(est.relative_width <= max_relative_width))
    throw Error(ErrorCode::BracketTooWide,
                "survivor bracket at the largest depth is too wide (width/midpoint " + std::to_string(est.relative_width) +
                    "); raise the counter cap or lower the measure floor");
  auto fit_to = [&](int last) {
    std::vector<double> x, y;
    for (int n = 2; n <= last; ++n) {
      x.push_back(n);
      y.push_back(-std::log(est.midpoints[static_cast<std::size_t>(n)]));
    }
    return fit_line(x, y);
  };
  LineFit f = fit_to(D);
  est.delta = f.slope;
  est.residual = f.residual;
  est.previous_delta = D >= 4 ? fit_to(D - 1).slope : est.delta;
  return est;
}

DeltaEstimate delta_estimate(int max_depth, const SurvivorOptions& options, double max_relative_width) {
  if (max_depth < 3) throw Error(ErrorCode::InvalidArgument, "delta needs max_depth >= 3");
  return delta_from_brackets(survivor_masses(max_depth, options), max_relative_width);
}

// Fast decay -------------------------------------------------------------------

namespace {

struct CellMasses {
  std::vector<double> masses;
  double tail = 0;
  double tail_max = 0;  // largest single cell beyond the cap
  double unresolved = 0;
};

void collect_cells(const FastNode& x, int level, int depth, long ncap, double floor, CellMasses& out) {
  Dens d = dens_of(x);
  double below = as_mass(d.cone) - as_mass(d.hole);
  double resolved = 0;
  for (long n = 1; n <= ncap; ++n) {
    bool any = false;
    for (Branch br : {Branch::Swap, Branch::Cycle, Branch::Keep}) {
      bool ok = false;
      FastNode c = child_of(x, n, br, ok);
      if (!ok) continue;
      Dens cd = dens_of(c);
      if (!cd.ok) continue;
      double m = as_mass(br == Branch::Keep ? cd.hole : cd.cone);
      if (m < floor) continue;
      any = true;
      resolved += m;
      if (level + 1 == depth) {
        out.masses.push_back(m);
      } else if (br != Branch::Keep) {
        collect_cells(c, level + 1, depth, ncap, floor, out);
      }
    }
    if (!any) break;
  }
  double rest = std::max(0.0, below - resolved);
  if (level + 1 == depth) {
    // Beyond the cap; cells there are no larger than the first ones past it.
    double biggest = 0;
    for (Branch br : {Branch::Swap, Branch::Cycle, Branch::Keep}) {
      bool ok = false;
      FastNode c = child_of(x, ncap + 1, br, ok);
      Dens cd = dens_of(c);
      if (ok && cd.ok) biggest = std::max(biggest, as_mass(br == Branch::Keep ? cd.hole : cd.cone));
      else biggest = std::max(biggest, rest);
    }
    out.tail += rest;
    out.tail_max = std::max(out.tail_max, biggest);
  } else {
    out.unresolved += rest;
  }
}

}  // namespace

FastDecayEstimate fast_decay_estimate(int depth, const std::vector<double>& eps_grid, long ncap, double measure_floor) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be at least 1");
  if (ncap < 1) throw Error(ErrorCode::InvalidArgument, "counter cap must be at least 1");
  if (eps_grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two eps values");
  for (std::size_t i = 0; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] > 0) || (i > 0 && !(eps_grid[i] > eps_grid[i - 1])))
      throw Error(ErrorCode::InvalidArgument, "eps grid must be positive and increasing");
  CellMasses cells;
  collect_cells(FastNode{{1, 1, 1}, {0, 1, 2}}, 0, depth, ncap, measure_floor, cells);
  std::sort(cells.masses.begin(), cells.masses.end());
  std::vector<double> prefix(cells.masses.size() + 1, 0);
  for (std::size_t i = 0; i < cells.masses.size(); ++i) prefix[i + 1] = prefix[i] + cells.masses[i];

  FastDecayEstimate est;
  est.eps = eps_grid;
  est.enumerated_mass = prefix.back();
  est.tail_mass = cells.tail;
  est.unresolved_mass = cells.unresolved;
  std::vector<double> x, y;
  for (double e : eps_grid) {
    auto idx = static_cast<std::size_t>(std::upper_bound(cells.masses.begin(), cells.masses.end(), e) - cells.masses.begin());
    double s = prefix[idx] + (e >= cells.tail_max ? cells.tail : 0.0);
    est.S.push_back(s);
    if (s > 0) {
      x.push_back(std::log(e));
      y.push_back(std::log(s));
    }
  }
  if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "eps grid catches fewer than two non-empty sums");
  LineFit f = fit_line(x, y);
  est.alpha1 = f.slope;
  est.residual = f.residual;
  return est;
}

// Box counting -----------------------------------------------------------------

BoxCount box_counting(const std::vector<std::array<double, 2>>& points, const std::vector<double>& sizes) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "empty point cloud");
  if (sizes.size() < 4) throw Error(ErrorCode::InvalidArgument, "need at least four grid sizes");
  std::vector<double> sorted_sizes = sizes;
  std::sort(sorted_sizes.begin(), sorted_sizes.end(), std::greater<>());
  std::vector<int> levels;
  for (double s : sorted_sizes) {
    int e = 0;
    double m = std::frexp(s, &e);
    if (!(s > 0 && s <= 1) || m != 0.5 || 1 - e > 30) throw Error(ErrorCode::InvalidArgument, "grid sizes must be powers of two in [2^-30, 1]");
    levels.push_back(1 - e);
  }
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end())
    throw Error(ErrorCode::InvalidArgument, "grid sizes must be distinct");
  if (sorted_sizes.front() / sorted_sizes.back() < std::pow(10.0, 1.5))
    throw Error(ErrorCode::InvalidArgument, "grid sizes must span at least 1.5 decades");
  for (const auto& p : points)
    if (!(p[0] >= 0 && p[0] <= 1 && p[1] >= 0 && p[1] <= 1)) throw Error(ErrorCode::InvalidArgument, "points must lie in [0,1]^2");

  BoxCount out;
  out.sizes = sorted_sizes;
  bool single = std::all_of(points.begin(), points.end(), [&](const auto& p) { return p == points[0]; });
  std::vector<std::uint64_t> keys(points.size());
  for (int level : levels) {
    std::int64_t cells = std::int64_t{1} << level;
    double scale = static_cast<double>(cells);
    auto index = [&](double v) {
      // ceil(v / s) - 1 sends a point on a boundary to the lower box.
      auto i = static_cast<std::int64_t>(std::ceil(v * scale)) - 1;
      return static_cast<std::uint64_t>(std::clamp<std::int64_t>(i, 0, cells - 1));
    };
    for (std::size_t i = 0; i < points.size(); ++i) keys[i] = (index(points[i][0]) << 32) | index(points[i][1]);
    std::sort(keys.begin(), keys.end());
    out.boxes.push_back(static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin()));
  }
  if (single) return out;  // dimension 0
  if (out.boxes.front() < 2) throw Error(ErrorCode::DegenerateCloud, "points meet fewer than two boxes at the coarsest size");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < sorted_sizes.size(); ++i) {
    x.push_back(-std::log(sorted_sizes[i]));
    y.push_back(std::log(static_cast<double>(out.boxes[i])));
  }
  LineFit f = fit_line(x, y);
  out.dimension = f.slope;
  out.residual = f.residual;
  return out;
}

double ad_bound(double delta_hat, double alpha1_hat) {
  if (!(delta_hat > 0) || !(alpha1_hat > 0)) throw Error(ErrorCode::NonPositiveInput, "both exponents must be positive");
  return 2.0 - std::min(delta_hat, alpha1_hat);
}

std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 16; ++i) g.push_back(std::pow(10.0, -7.0 + i / 4.0));
  return g;
}

std::vector<double> default_box_sizes() {
  std::vector<double> g;
  for (int k = 4; k <= 9; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

DimensionReport run_dimension(const DimensionConfig& c) {
  DimensionReport r;
  r.config = c;
  if (r.config.eps_grid.empty()) r.config.eps_grid = default_eps_grid();
  if (r.config.box_sizes.empty()) r.config.box_sizes = default_box_sizes();
  SurvivorOptions so;
  so.measure_floor = c.measure_floor;
  so.ncap = c.ncap;
  so.workers = c.workers;
  r.brackets = survivor_masses(c.depth, so);
  bool fit = c.depth >= 3;  // otherwise only the brackets are reported
  if (fit) r.delta = delta_from_brackets(r.brackets);
  r.alpha1 = fast_decay_estimate(c.alpha_depth, r.config.eps_grid, c.alpha_ncap);

  ChaosGameOptions g;
  g.count = c.points;
  g.burn_in = c.burn_in;
  g.seed = c.seed;
  g.workers = c.workers;
  auto cloud = chaos_game_simplex(g);
  std::vector<std::array<double, 2>> pts(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) pts[i] = {cloud[i][0], cloud[i][1]};
  r.box = box_counting(pts, r.config.box_sizes);
  r.ad_bound = fit ? ad_bound(r.delta.delta, r.alpha1.alpha1) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace rauzy
