#pragma once

#include <array>
#include <cmath>

#include "kgops/errors.hpp"

namespace kgops {

// Spatial vector for d = 2 or 3. Unused components stay zero for d = 2.
using Vec = std::array<double, 3>;

inline constexpr Vec kZeroVec{0.0, 0.0, 0.0};

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec scale(const Vec& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

// Rotation about the coordinate axis `axis` (0,1,2) through the origin.
// For d = 2 the rotation acts in the (x0, x1) plane and `axis` is ignored.
inline Vec rotate(const Vec& x, double theta, int axis, int dim) {
  const double c = std::cos(theta), s = std::sin(theta);
  int i, j;
  if (dim == 2) {
    i = 0; j = 1;
  } else {
    i = (axis + 1) % 3;
    j = (axis + 2) % 3;
  }
  Vec out = x;
  out[i] = c * x[i] - s * x[j];
  out[j] = s * x[i] + c * x[j];
  return out;
}

inline Vec unit_axis(int axis) {
  Vec e = kZeroVec;
  e[axis] = 1.0;
  return e;
}

struct Point {
  double t = 0.0;
  Vec x = kZeroVec;
  int dim = 3;
};

inline Point make_point(double t, double x0, double x1, double x2 = 0.0, int dim = 3) {
  return Point{t, Vec{x0, x1, x2}, dim};
}

}  // namespace kgops
