#pragma once

#include <array>
#include <string>

#include "rauzy/rational.hpp"

namespace rauzy {

template <class T>
using Vec3 = std::array<T, 3>;

/// Dense 3x3 matrix, row-major.
template <class T>
struct Mat3 {
  std::array<T, 9> m{};

  T& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
  const T& operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

  static Mat3 identity() {
    Mat3 out;
    for (int i = 0; i < 3; ++i) out(i, i) = T(1);
    return out;
  }

  Mat3 transpose() const {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
    return out;
  }

  T det() const {
    const Mat3& a = *this;
    T d = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1));
    d -= a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0));
    d += a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    return d;
  }

  /// Adjugate; equals the inverse times det.
  Mat3 adjugate() const {
    const Mat3& a = *this;
    Mat3 out;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        int r0 = (c + 1) % 3, r1 = (c + 2) % 3;
        int c0 = (r + 1) % 3, c1 = (r + 2) % 3;
        out(r, c) = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
      }
    }
    return out;
  }

  bool all_positive() const {
    for (const T& x : m)
      if (!(x > 0)) return false;
    return true;
  }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        T s = a(r, 0) * b(0, c);
        s += a(r, 1) * b(1, c);
        s += a(r, 2) * b(2, c);
        out(r, c) = s;
      }
    }
    return out;
  }

  friend Vec3<T> operator*(const Mat3& a, const Vec3<T>& v) {
    Vec3<T> out;
    for (int r = 0; r < 3; ++r) {
      T s = a(r, 0) * v[0];
      s += a(r, 1) * v[1];
      s += a(r, 2) * v[2];
      out[static_cast<std::size_t>(r)] = s;
    }
    return out;
  }

  friend bool operator==(const Mat3& a, const Mat3& b) {
    for (std::size_t i = 0; i < 9; ++i)
      if (!(a.m[i] == b.m[i])) return false;
    return true;
  }

  template <class U>
  Mat3<U> cast() const {
    Mat3<U> out;
    for (std::size_t i = 0; i < 9; ++i) out.m[i] = U(m[i]);
    return out;
  }
};

using IntMatrix = Mat3<long>;

/// 3x3 nonnegative unimodular integer matrix attached to a path.
using CocycleMatrix = Mat3<BigInt>;

template <class T>
std::string to_string(const Mat3<T>& a) {
  std::string s = "(";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if constexpr (std::is_same_v<T, BigInt>) {
        s += a(r, c).get_str();
      } else {
        s += std::to_string(a(r, c));
      }
      if (c < 2) s += " ";
    }
    if (r < 2) s += "; ";
  }
  return s + ")";
}

}  // namespace rauzy
