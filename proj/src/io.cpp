#include "rauzy/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "rauzy/error.hpp"

namespace rauzy {

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void put_le(std::ostream& out, double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

}  // namespace

json to_json(const Provenance& p) { return {{"version", p.version}, {"seed", p.seed}, {"flags", p.flags}}; }

std::string rational_text(const Rational& r) { return r.num().get_str() + "/" + r.den().get_str(); }

json to_json(const Rational& r) { return rational_text(r); }

json to_json(const Perm3& p) { return {p.at(0).label(), p.at(1).label(), p.at(2).label()}; }

json to_json(const IntMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

json to_json(const CocycleMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0).get_str(), m(r, 1).get_str(), m(r, 2).get_str()});
  return rows;
}

json to_json(const SpecialSystem& s) {
  const auto& l = s.lengths().values;
  return {{"lengths", {to_json(l[0]), to_json(l[1]), to_json(l[2])}}, {"order", to_json(s.order())}};
}

json to_json(const RauzyPath& path) {
  json out = json::array();
  for (const auto& e : path.edges)
    out.push_back({{"winner", e.winner.label()},
                   {"n", e.n},
                   {"branch", to_string(e.branch)},
                   {"from", to_json(e.from)},
                   {"to", to_json(e.to)}});
  return out;
}

json to_json(const RauzyGraph& g) {
  json vertices = json::array(), edges = json::array(), holes = json::array();
  for (const auto& v : g.vertices()) {
    vertices.push_back(to_json(v));
    if (g.hole_reachable_from(v)) holes.push_back(to_json(v));
  }
  for (const auto& e : g.edges())
    edges.push_back({{"from", to_json(e.from)},
                     {"to", to_json(e.to)},
                     {"winner", e.winner.label()},
                     {"branch", to_string(e.branch)}});
  return {{"vertices", vertices},
          {"edges", edges},
          {"hole_sources", holes},
          {"verdict", g.strongly_connected() ? "connected" : "disconnected"}};
}

json to_json(const Cylinder& c) {
  return {{"path", to_json(c.path)},
          {"measure", to_json(c.measure)},
          {"survives", c.survives},
          {"kind", to_string(c.kind)}};
}

json to_json(const MassBracket& b) {
  return {{"lower", to_json(b.lower)},
          {"upper", to_json(b.upper)},
          {"midpoint", b.midpoint()},
          {"width", b.width()}};
}

json to_json(const TailCurve& t) {
  return {{"thresholds", t.thresholds},
          {"probabilities", t.probabilities},
          {"exceed_counts", t.exceed_counts},
          {"fitted_exponent", t.fitted_exponent},
          {"fit_residual", t.fit_residual},
          {"fit_points", t.fit_points},
          {"attempts", t.attempts},
          {"returned", t.returned},
          {"holes", t.holes},
          {"no_return", t.no_return},
          {"ties", t.ties},
          {"partial_sum_growth", finite_or_null(t.partial_sum_growth)}};
}

json to_json(const KerckhoffResult& k) {
  return {{"T", k.T},
          {"samples", k.samples},
          {"hits", k.hits},
          {"frequency", k.frequency},
          {"bound", k.bound},
          {"sigma", k.sigma},
          {"margin", k.bound + 3 * k.sigma - k.frequency},
          {"pass", k.pass}};
}

json to_json(const DimensionReport& r) {
  json brackets = json::array();
  for (const auto& b : r.brackets) brackets.push_back(to_json(b));
  const auto& c = r.config;
  bool fit = !r.delta.midpoints.empty();
  auto when_fit = [&](double x) { return fit ? json(x) : json(nullptr); };
  return {{"delta", when_fit(r.delta.delta)},
          {"delta_residual", when_fit(r.delta.residual)},
          {"delta_previous_depth", when_fit(r.delta.previous_delta)},
          {"relative_width", when_fit(r.delta.relative_width)},
          {"survivor_brackets", brackets},
          {"alpha1", r.alpha1.alpha1},
          {"alpha1_residual", r.alpha1.residual},
          {"alpha1_curve", {{"eps", r.alpha1.eps}, {"S", r.alpha1.S}}},
          {"alpha1_tail_mass", r.alpha1.tail_mass},
          {"box_dimension", r.box.dimension},
          {"box_residual", r.box.residual},
          {"box_curve", {{"sizes", r.box.sizes}, {"boxes", r.box.boxes}}},
          {"ad_bound", finite_or_null(r.ad_bound)},
          {"config",
           {{"depth", c.depth},
            {"ncap", c.ncap},
            {"floor", c.measure_floor},
            {"alpha_depth", c.alpha_depth},
            {"alpha_ncap", c.alpha_ncap},
            {"points", c.points},
            {"burn_in", c.burn_in},
            {"seed", c.seed},
            {"workers", c.workers}}}};
}

json to_json(const PositivityCheck& c) {
  return {{"suite", "lemma2"},
          {"max_length", c.report.max_length},
          {"paths", c.report.paths},
          {"complete", c.report.complete},
          {"complete_not_positive", c.report.complete_not_positive},
          {"positive_not_complete", c.report.positive_not_complete},
          {"seconds", c.seconds},
          {"pass", c.pass}};
}

json to_json(const ExpansionCheck& c) {
  return {{"suite", "expansion"},
          {"samples", c.samples},
          {"max_n", c.max_n},
          {"exceptions", c.exceptions},
          {"cell_mismatches", c.cell_mismatches},
          {"min_lower_ratio", finite_or_null(c.min_lower_ratio)},
          {"min_upper_ratio", finite_or_null(c.min_upper_ratio)},
          {"pass", c.pass}};
}

json to_json(const DistortionCheck& c) {
  return {{"suite", "distortion"},
          {"pairs", c.pairs},
          {"max_n", c.max_n},
          {"constant", c.constant},
          {"exceptions", c.exceptions},
          {"worst_ratio", c.worst_ratio},
          {"margin", c.constant - c.worst_ratio},
          {"pass", c.pass}};
}

json to_json(const RoofJacobianCheck& c) {
  return {{"suite", "roof-jacobian"},
          {"steps", c.steps},
          {"tolerance", c.tolerance},
          {"exceptions", c.exceptions},
          {"worst_relative_error", c.worst_relative_error},
          {"pass", c.pass}};
}

json to_json(const KerckhoffCheck& c) {
  json rows = json::array();
  for (const auto& r : c.results) rows.push_back(to_json(r));
  return {{"suite", "kerckhoff"}, {"results", rows}, {"pass", c.pass}};
}

json to_json(const PartitionCheck& c) {
  json levels = json::array();
  for (const auto& l : c.levels)
    levels.push_back({{"depth", l.depth},
                      {"ncap", l.ncap},
                      {"cells", l.cells},
                      {"cell_mass", to_json(l.cell_mass)},
                      {"hole_mass", to_json(l.hole_mass)},
                      {"remainder_mass", to_json(l.remainder_mass)},
                      {"total", to_json(l.total)},
                      {"pass", l.pass}});
  return {{"suite", "partition"},
          {"levels", levels},
          {"depth1_bracket", to_json(c.depth1)},
          {"contains_three_quarters", c.contains_three_quarters},
          {"pass", c.pass}};
}

std::string tail_csv(const TailCurve& t) {
  std::ostringstream out;
  out << "T,probability,exceed_count\n";
  for (std::size_t i = 0; i < t.thresholds.size(); ++i)
    out << g17(t.thresholds[i]) << ',' << g17(t.probabilities[i]) << ',' << t.exceed_counts[i] << '\n';
  return out.str();
}

std::string dimension_csv(const DimensionReport& r) {
  std::ostringstream out;
  out << "series,x,y\n";
  for (std::size_t n = 0; n < r.brackets.size(); ++n)
    out << "survivor_mass," << n << ',' << g17(r.brackets[n].midpoint()) << '\n';
  for (std::size_t i = 0; i < r.alpha1.eps.size(); ++i)
    out << "small_cell_mass," << g17(r.alpha1.eps[i]) << ',' << g17(r.alpha1.S[i]) << '\n';
  for (std::size_t i = 0; i < r.box.sizes.size(); ++i)
    out << "box_count," << g17(r.box.sizes[i]) << ',' << r.box.boxes[i] << '\n';
  return out.str();
}

void write_points_csv(std::ostream& out, const std::vector<std::array<double, 2>>& points) {
  for (const auto& p : points) out << g17(p[0]) << ',' << g17(p[1]) << '\n';
}

void write_points_binary(std::ostream& out, const std::vector<std::array<double, 2>>& points) {
  out.write(kPointsMagic, 8);
  for (const auto& p : points) {
    put_le(out, p[0]);
    put_le(out, p[1]);
  }
}

std::vector<std::array<double, 2>> read_points_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kPointsMagic, 8) != 0)
    throw Error(ErrorCode::Io, "missing RGPTS001 header");
  std::vector<std::array<double, 2>> out;
  for (;;) {
    unsigned char bytes[16];
    in.read(reinterpret_cast<char*>(bytes), 16);
    auto got = in.gcount();
    if (got == 0) break;
    if (got != 16) throw Error(ErrorCode::Io, "truncated point record");
    std::array<double, 2> p{};
    for (int k = 0; k < 2; ++k) {
      std::uint64_t bits = 0;
      for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[8 * k + i];
      p[static_cast<std::size_t>(k)] = std::bit_cast<double>(bits);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<std::uint8_t> render_density(const std::vector<std::array<double, 3>>& points, int width, int height) {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "raster size must be positive");
  std::vector<std::uint32_t> hits(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  for (const auto& l : points) {
    double x = (l[1] + 0.5 * l[2]) * width;
    double y = (1.0 - l[2]) * height;
    int px = std::clamp(static_cast<int>(x), 0, width - 1);
    int py = std::clamp(static_cast<int>(y), 0, height - 1);
    ++hits[static_cast<std::size_t>(py) * static_cast<std::size_t>(width) + static_cast<std::size_t>(px)];
  }
  std::uint32_t top = *std::max_element(hits.begin(), hits.end());
  std::vector<std::uint8_t> out(hits.size(), 0);
  if (top == 0) return out;
  double scale = 255.0 / std::log1p(static_cast<double>(top));
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] == 0) continue;
    double v = std::round(std::log1p(static_cast<double>(hits[i])) * scale);
    out[i] = static_cast<std::uint8_t>(std::clamp(v, 1.0, 255.0));
  }
  return out;
}

void write_pgm(std::ostream& out, int width, int height, const std::vector<std::uint8_t>& pixels,
               const Provenance& provenance) {
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error(ErrorCode::InvalidArgument, "pixel count does not match the raster size");
  out << "P5\n# rauzy " << provenance.version << " seed=" << provenance.seed << " flags=" << provenance.flags << "\n"
      << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace rauzy
