#pragma once

#include <cmath>
#include <vector>

#include "kgops/bump.hpp"
#include "kgops/vec.hpp"

namespace kgops {

// Open ball in the t = 0 hyperplane.
struct Ball {
  Vec center = kZeroVec;
  double radius = 1.0;
  int dim = 3;
};

// Double cone D(B): domain of dependence of a ball on the t = 0 slice.
// Contains (t, x) iff |x - center| + |t| < radius. Open region.
struct DoubleCone {
  Ball base;
};

inline DoubleCone double_cone(const Ball& b) { return DoubleCone{b}; }

inline bool contains(const DoubleCone& region, const Point& p) {
  if (region.base.dim != p.dim) throw DimensionMismatch("region / point dimension mismatch");
  return distance(p.x, region.base.center) + std::abs(p.t) < region.base.radius;
}

// Double cones over disjoint balls at t = 0 are causally disjoint.
inline bool are_spacelike(const DoubleCone& a, const DoubleCone& b) {
  return distance(a.base.center, b.base.center) >= a.base.radius + b.base.radius;
}

// Causal set J(O): points reachable by a causal curve from the cone.
inline bool in_causal_set(const DoubleCone& o, const Point& p) {
  if (o.base.dim != p.dim) throw DimensionMismatch("region / point dimension mismatch");
  return distance(p.x, o.base.center) - std::abs(p.t) < o.base.radius;
}

inline Ball rotate_ball(const Ball& b, double theta, int axis = 2) {
  Ball out = b;
  out.center = rotate(b.center, theta, axis, b.dim);
  return out;
}

// The figure geometry: concentric regions O(r1) in O(r2) for the localized
// rotation, and a spacelike pair O(+-) = D(B(s) +- lambda e1) inside O(r1).
struct ScenarioGeometry {
  double r1 = 1.9;
  double r2 = 2.4;
  double s = 0.8;
  double lambda = 1.0;
  double theta = M_PI;
  int axis = 2;
  int dim = 2;

  Ball ball_r1() const { return {kZeroVec, r1, dim}; }
  Ball ball_r2() const { return {kZeroVec, r2, dim}; }
  Ball ball_plus() const { return {scale(unit_axis(0), +lambda), s, dim}; }
  Ball ball_minus() const { return {scale(unit_axis(0), -lambda), s, dim}; }
  DoubleCone o_r1() const { return double_cone(ball_r1()); }
  DoubleCone o_r2() const { return double_cone(ball_r2()); }
  DoubleCone o_plus() const { return double_cone(ball_plus()); }
  DoubleCone o_minus() const { return double_cone(ball_minus()); }

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (!(r1 > 0.0 && r2 > r1)) out.push_back("geometry requires 0 < r1 < r2");
    if (!(s > 0.0 && lambda > 0.0)) out.push_back("geometry requires s > 0 and lambda > 0");
    if (!(s + lambda < r1)) out.push_back("constraint s + lambda < r1 violated");
    if (!(lambda > s)) out.push_back("O(+) and O(-) must be spacelike: lambda > s required");
    if (dim != 2 && dim != 3) out.push_back("dimension must be 2 or 3");
    if (axis < 0 || axis > 2) out.push_back("rotation axis index must be 0, 1 or 2");
    return out;
  }

  // Support of f sits inside the double cone over `ball` iff the furthest
  // support point still satisfies the cone inequality.
  bool function_in_cone(const TestFunction& f, const Ball& ball) const {
    return distance(f.center, ball.center) + f.radius + f.time_extent() < ball.radius;
  }
  bool function_spacelike_from_cone(const TestFunction& f, const Ball& ball) const {
    return distance(f.center, ball.center) - f.radius - f.time_extent() >= ball.radius;
  }
};

}  // namespace kgops
