#pragma once

#include "kgops/bump.hpp"
#include "kgops/green.hpp"
#include "kgops/threads.hpp"

namespace kgops {

// Localized instantaneous rotation about a coordinate axis through the
// origin: cutoff profile eta (1 on B(r1), 0 outside B(r2)), flow gamma_theta,
// and the induced symplectomorphism S_theta on Cauchy data.
struct LocalizedRotation {
  double r1 = 1.9;
  double r2 = 2.4;
  double theta = M_PI;
  int axis = 2;  // ignored for d = 2

  BumpProfile eta_profile() const { return {r1, r2}; }
};

inline double eta(const LocalizedRotation& rot, double r) {
  return rot.eta_profile().value(r);
}

// The generating field eta(r)(x1 d2 - x2 d1) is tangent to spheres, so r is
// invariant along the flow and the closed form is a rotation by theta*eta(r).
inline Vec gamma(const LocalizedRotation& rot, const Vec& x, int dim) {
  return rotate(x, rot.theta * eta(rot, norm(x)), rot.axis, dim);
}

inline Vec gamma_inverse(const LocalizedRotation& rot, const Vec& x, int dim) {
  return rotate(x, -rot.theta * eta(rot, norm(x)), rot.axis, dim);
}

// det of the spatial Jacobian of gamma_theta, by 5-point central differences
// with step 1e-4 * min(1, r2) per coordinate. The generating field is
// divergence-free, so the flow is volume preserving and this must return 1;
// the pipeline multiplies by the computed value rather than assuming it.
inline double jacobian_det(const LocalizedRotation& rot, const Vec& x, int dim) {
  const double step = 1e-4 * std::min(1.0, rot.r2);
  double J[3][3] = {{0}};
  for (int j = 0; j < dim; ++j) {
    Vec e = kZeroVec;
    e[j] = step;
    const Vec p2 = gamma(rot, add(x, scale(e, 2.0)), dim);
    const Vec p1 = gamma(rot, add(x, e), dim);
    const Vec m1 = gamma(rot, sub(x, e), dim);
    const Vec m2 = gamma(rot, sub(x, scale(e, 2.0)), dim);
    for (int i = 0; i < dim; ++i)
      J[i][j] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * step);
  }
  if (dim == 2) return J[0][0] * J[1][1] - J[0][1] * J[1][0];
  return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
         J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
         J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

namespace detail {

// Keys cubic convolution kernel (a = -1/2), interpolating: k(0)=1, k(+-1)=0.
inline double catmull_rom_weight(double t) {
  const double at = std::abs(t);
  if (at < 1.0) return ((1.5 * at - 2.5) * at) * at + 1.0;
  if (at < 2.0) return ((-0.5 * at + 2.5) * at - 4.0) * at + 2.0;
  return 0.0;
}

// Separable periodic Catmull-Rom interpolation at point y.
inline double interpolate(const LatticeField& f, const Vec& y) {
  const SpatialGrid& g = f.grid;
  const int n = g.n;
  const double h = g.spacing();
  int base[3] = {0, 0, 0};
  double w[3][4];
  for (int a = 0; a < g.dim; ++a) {
    const double idx = (y[a] + g.half_length) / h;
    const double fl = std::floor(idx);
    base[a] = static_cast<int>(fl);
    const double frac = idx - fl;
    for (int s = -1; s <= 2; ++s) w[a][s + 1] = catmull_rom_weight(frac - s);
  }
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  double acc = 0.0;
  if (g.dim == 2) {
    for (int si = -1; si <= 2; ++si) {
      const int ii = wrap(base[0] + si);
      for (int sj = -1; sj <= 2; ++sj)
        acc += w[0][si + 1] * w[1][sj + 1] * f.values[g.encode(ii, wrap(base[1] + sj))];
    }
  } else {
    for (int si = -1; si <= 2; ++si) {
      const int ii = wrap(base[0] + si);
      for (int sj = -1; sj <= 2; ++sj) {
        const int jj = wrap(base[1] + sj);
        const double wij = w[0][si + 1] * w[1][sj + 1];
        for (int sk = -1; sk <= 2; ++sk)
          acc += wij * w[2][sk + 1] * f.values[g.encode(ii, jj, wrap(base[2] + sk))];
      }
    }
  }
  return acc;
}

}  // namespace detail

// S_theta on Cauchy data: u -> u o gamma^{-1}, v -> q * (v o gamma^{-1}),
// resampled by cubic interpolation at the pulled-back points. Nodes with
// eta(|x|) == 0 are copied verbatim, never interpolated, so the map is the
// bit-exact identity outside B(r2).
inline CauchyData apply_S(const LocalizedRotation& rot, const CauchyData& data) {
  const SpatialGrid& g = data.grid();
  CauchyData out = CauchyData::zero(g);
  parallel_for(data.u.values.size(), [&](std::size_t flat) {
    const Vec x = g.node(flat);
    const double e = eta(rot, norm(x));
    if (e == 0.0 || rot.theta == 0.0) {
      out.u.values[flat] = data.u.values[flat];
      out.v.values[flat] = data.v.values[flat];
      return;
    }
    const Vec y = gamma_inverse(rot, x, g.dim);
    const double q = jacobian_det(rot, y, g.dim);
    out.u.values[flat] = detail::interpolate(data.u, y);
    out.v.values[flat] = q * detail::interpolate(data.v, y);
  });
  return out;
}

}  // namespace kgops
