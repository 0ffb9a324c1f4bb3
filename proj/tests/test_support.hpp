#pragma once

#include <random>

#include "rauzy/soi.hpp"

namespace rauzy::testing {

/// Random special system with lengths p/(p+q+r), q/(...), r/(...).
inline SpecialSystem random_system(std::mt19937_64& rng, long max_int = 1000000) {
  std::uniform_int_distribution<long> dist(1, max_int);
  for (;;) {
    long p = dist(rng), q = dist(rng), r = dist(rng);
    if (p == q || q == r || p == r) continue;
    long total = p + q + r;
    return SpecialSystem::make(Rational(p, total), Rational(q, total), Rational(r, total));
  }
}

/// Random system whose largest length exceeds 1/2, so the first step is not a hole.
inline SpecialSystem random_nonhole_system(std::mt19937_64& rng, long max_int = 1000000) {
  for (;;) {
    SpecialSystem s = random_system(rng, max_int);
    if (s.sorted(0) > Rational(1, 2)) return s;
  }
}

inline Vec3<Rational> sorted_lengths(const SpecialSystem& s) { return {s.sorted(0), s.sorted(1), s.sorted(2)}; }

inline Vec3<Rational> times(const IntMatrix& m, const Vec3<Rational>& v) {
  Vec3<Rational> out;
  for (int r = 0; r < 3; ++r) {
    Rational acc(0);
    for (int c = 0; c < 3; ++c) acc += Rational(m(r, c)) * v[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

}  // namespace rauzy::testing
