#pragma once

// JSON, CSV and binary encodings, and the gasket raster.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rauzy/checks.hpp"
#include "rauzy/dimension.hpp"
#include "rauzy/measure.hpp"
#include "rauzy/rauzy_graph.hpp"
#include "rauzy/soi.hpp"

namespace rauzy {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr char kPointsMagic[8] = {'R', 'G', 'P', 'T', 'S', '0', '0', '1'};

/// Written into every output file.
struct Provenance {
  std::string version = kVersion;
  std::uint64_t seed = 0;
  std::string flags;
};

json to_json(const Provenance& p);

/// Always "p/q", also for integers.
std::string rational_text(const Rational& r);
json to_json(const Rational& r);
json to_json(const Perm3& p);  // [i,j,k], 1-based
json to_json(const IntMatrix& m);
json to_json(const CocycleMatrix& m);  // entries as decimal strings
json to_json(const SpecialSystem& s);
json to_json(const RauzyPath& path);
json to_json(const RauzyGraph& g);
json to_json(const Cylinder& c);
json to_json(const MassBracket& b);
json to_json(const TailCurve& t);
json to_json(const KerckhoffResult& k);
json to_json(const DimensionReport& r);
json to_json(const PositivityCheck& c);
json to_json(const ExpansionCheck& c);
json to_json(const DistortionCheck& c);
json to_json(const RoofJacobianCheck& c);
json to_json(const KerckhoffCheck& c);
json to_json(const PartitionCheck& c);

/// One line per threshold: T,probability,exceed_count.
std::string tail_csv(const TailCurve& t);
/// Fit curves of a dimension report: series,x,y rows.
std::string dimension_csv(const DimensionReport& r);

/// a,b per line with 17 significant digits.
void write_points_csv(std::ostream& out, const std::vector<std::array<double, 2>>& points);
/// Magic "RGPTS001", then little-endian float64 pairs.
void write_points_binary(std::ostream& out, const std::vector<std::array<double, 2>>& points);
/// Throws Io on a bad header or a truncated pair.
std::vector<std::array<double, 2>> read_points_binary(std::istream& in);

/// Log-scaled hit density of barycentric points on a WxH raster, the simplex
/// drawn with vertex 1 bottom left, 2 bottom right and 3 at the top. Every hit
/// pixel is at least 1.
std::vector<std::uint8_t> render_density(const std::vector<std::array<double, 3>>& points, int width, int height);
/// Binary graymap ("P5") with a comment line carrying the provenance.
void write_pgm(std::ostream& out, int width, int height, const std::vector<std::uint8_t>& pixels,
               const Provenance& provenance);

}  // namespace rauzy
