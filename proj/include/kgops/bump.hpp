#pragma once

#include <cmath>

#include "kgops/vec.hpp"

namespace kgops {

namespace detail {

// q(x) = exp(-1/x) for x > 0, exactly 0 otherwise. All derivatives vanish at 0.
inline double qexp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace detail

// Smooth monotone step: 0 for x <= 0, 1 for x >= 1.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = detail::qexp(x);
  const double b = detail::qexp(1.0 - x);
  return a / (a + b);
}

// Mollifier profile: value 1 for r <= a, 0 for r >= b, smooth monotone between.
struct BumpProfile {
  double a = 0.0;  // inner plateau radius
  double b = 1.0;  // outer support radius

  double value(double r) const {
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    return smoothstep((b - r) / (b - a));
  }

  // First and second derivatives in r; analytic, used by the quadrature
  // cross-checks. Zero on the plateau and outside the support.
  double d1(double r) const {
    if (r <= a || r >= b) return 0.0;
    double s1, s2;
    step_derivs((b - r) / (b - a), s1, s2);
    return -s1 / (b - a);
  }
  double d2(double r) const {
    if (r <= a || r >= b) return 0.0;
    double s1, s2;
    step_derivs((b - r) / (b - a), s1, s2);
    return s2 / ((b - a) * (b - a));
  }

 private:
  // S(x) = A/(A+B) with A = exp(-1/x), B = exp(-1/(1-x)); returns S', S''.
  static void step_derivs(double x, double& s1, double& s2) {
    const double A = std::exp(-1.0 / x);
    const double B = std::exp(-1.0 / (1.0 - x));
    const double y = 1.0 - x;
    const double Ap = A / (x * x);
    const double Bp = -B / (y * y);
    const double App = A / (x * x * x * x) - 2.0 * A / (x * x * x);
    const double Bpp = B / (y * y * y * y) - 2.0 * B / (y * y * y);
    const double D = A + B;
    const double Np = Ap * B - A * Bp;
    s1 = Np / (D * D);
    s2 = (App * B - A * Bpp) / (D * D) - 2.0 * Np * (Ap + Bp) / (D * D * D);
  }
};

// Parametric smooth compactly supported test function on spacetime:
//   f(t, x) = amplitude * P_T(|t - t0|) * P_R(|x - center|)
// with mollifier profiles P. Support is exactly
// {|t - t0| <= t_halfwidth} x {|x - center| <= radius}.
struct TestFunction {
  Vec center = kZeroVec;
  double radius = 1.0;       // spatial support radius
  double t0 = 0.0;           // time center
  double t_halfwidth = 0.1;  // time support half-width
  double amplitude = 1.0;
  double plateau_fraction = 0.3;  // inner plateau radius as fraction of support
  int dim = 3;

  BumpProfile space_profile() const { return {plateau_fraction * radius, radius}; }
  BumpProfile time_profile() const { return {plateau_fraction * t_halfwidth, t_halfwidth}; }

  double eval(double t, const Vec& x) const {
    const double tp = time_profile().value(std::abs(t - t0));
    if (tp == 0.0) return 0.0;
    const double sp = space_profile().value(distance(x, center));
    return amplitude * tp * sp;
  }
  double eval(const Point& p) const {
    if (p.dim != dim) throw DimensionMismatch("test function / point dimension mismatch");
    return eval(p.t, p.x);
  }

  // Analytic spatial gradient (smoothness checks).
  Vec grad_spatial(double t, const Vec& x) const {
    const double tp = time_profile().value(std::abs(t - t0));
    if (tp == 0.0) return kZeroVec;
    const Vec rel = sub(x, center);
    const double r = norm(rel);
    if (r == 0.0) return kZeroVec;
    const double dp = space_profile().d1(r);
    return scale(rel, amplitude * tp * dp / r);
  }

  double spatial_extent() const { return norm(center) + radius; }
  double time_extent() const { return std::abs(t0) + t_halfwidth; }

  TestFunction rotated(double theta, int axis = 2) const {
    TestFunction out = *this;
    out.center = rotate(center, theta, axis, dim);
    return out;
  }
  TestFunction translated(const Vec& shift) const {
    TestFunction out = *this;
    out.center = add(center, shift);
    return out;
  }
  TestFunction scaled(double factor) const {
    TestFunction out = *this;
    out.amplitude *= factor;
    return out;
  }
};

}  // namespace kgops
