#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "rauzy/error.hpp"
#include "rauzy/io.hpp"

using namespace rauzy;

TEST_CASE("rationals and systems") {
  CHECK(to_json(Rational(3, 5)) == "3/5");
  CHECK(to_json(Rational(2)) == "2/1");
  CHECK(to_json(Rational(-1, 4)) == "-1/4");
  json s = to_json(SpecialSystem::make(Rational(1, 4), Rational(3, 5), Rational(3, 20)));
  CHECK(s["lengths"] == json{"1/4", "3/5", "3/20"});
  CHECK(s["order"] == json{2, 1, 3});
}

TEST_CASE("paths") {
  RauzyPath p{Perm3::identity(), {}};
  p.append(PathEdge::make(p.end(), Branch::Cycle, 2));
  json j = to_json(p);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["winner"] == 1);
  CHECK(j[0]["n"] == 2);
  CHECK(j[0]["from"] == json{1, 2, 3});
  CHECK(j[0]["to"] == json{2, 3, 1});
}

TEST_CASE("point clouds") {
  std::vector<std::array<double, 2>> pts{{0.1, 0.2}, {1.0 / 3, std::nextafter(0.5, 1.0)}, {0, 1}};
  std::ostringstream csv;
  write_points_csv(csv, pts);
  std::istringstream lines(csv.str());
  std::string line;
  for (const auto& p : pts) {
    REQUIRE(std::getline(lines, line));
    auto comma = line.find(',');
    CHECK(std::stod(line.substr(0, comma)) == p[0]);
    CHECK(std::stod(line.substr(comma + 1)) == p[1]);
  }

  std::stringstream bin;
  write_points_binary(bin, pts);
  std::string bytes = bin.str();
  CHECK(bytes.size() == 8 + 16 * pts.size());
  CHECK(bytes.substr(0, 8) == "RGPTS001");
  // 0.1 little-endian: 9a 99 99 99 99 99 b9 3f
  CHECK(static_cast<unsigned char>(bytes[8]) == 0x9a);
  CHECK(static_cast<unsigned char>(bytes[15]) == 0x3f);
  CHECK(read_points_binary(bin) == pts);

  std::istringstream bad("RGPTS002");
  CHECK_THROWS_AS(read_points_binary(bad), Error);
  std::istringstream cut(bytes.substr(0, 8 + 12));
  CHECK_THROWS_AS(read_points_binary(cut), Error);
}

TEST_CASE("raster") {
  auto one = render_density({{1.0 / 3, 1.0 / 3, 1.0 / 3}}, 64, 64);
  std::size_t lit = 0;
  for (auto v : one) lit += v != 0;
  CHECK(lit == 1);

  // Near each vertex of the simplex: bottom left, bottom right, top.
  auto corners = render_density({{0.98, 0.01, 0.01}, {0.01, 0.98, 0.01}, {0.01, 0.01, 0.98}}, 100, 100);
  CHECK(corners[99 * 100 + 1] == 255);
  CHECK(corners[99 * 100 + 98] == 255);
  CHECK(corners[2 * 100 + 50] == 255);

  std::ostringstream out;
  write_pgm(out, 64, 64, one, Provenance{kVersion, 7, "render --points 1"});
  CHECK(out.str().rfind("P5\n# rauzy 0.1.0 seed=7 flags=render --points 1\n64 64\n255\n", 0) == 0);
  CHECK_THROWS_AS(write_pgm(out, 10, 10, one, {}), Error);
}
