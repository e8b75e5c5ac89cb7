#pragma once

#include <functional>

#include "kgops/bump.hpp"
#include "kgops/grid.hpp"
#include "kgops/quadrature.hpp"

namespace kgops {

namespace detail {

// Per-axis node range covering [lo, hi]; the support must be interior, so no
// periodic wrap is needed here.
inline void axis_range(const SpatialGrid& g, double lo, double hi, int& i0, int& i1) {
  const double h = g.spacing();
  i0 = std::max(0, static_cast<int>(std::floor((lo + g.half_length) / h)));
  i1 = std::min(g.n - 1, static_cast<int>(std::ceil((hi + g.half_length) / h)));
}

}  // namespace detail

inline void check_sample_margin(const TestFunction& f, const SpatialGrid& g) {
  const double margin = 2.0 * g.spacing();
  for (int a = 0; a < g.dim; ++a) {
    if (std::abs(f.center[a]) + f.radius > g.half_length - margin)
      throw SupportOverflow("test function support touches the box boundary");
  }
}

// Pointwise evaluation of f(t, .) on the grid nodes. Exactly zero outside the
// support box; returns an all-zero field when t lies outside the time support.
inline LatticeField sample(const TestFunction& f, const SpatialGrid& g, double t) {
  LatticeField out(g);
  if (std::abs(t - f.t0) > f.t_halfwidth) return out;
  check_sample_margin(f, g);
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int a = 0; a < g.dim; ++a)
    detail::axis_range(g, f.center[a] - f.radius, f.center[a] + f.radius, lo[a], hi[a]);
  const int k0 = g.dim == 3 ? lo[2] : 0;
  const int k1 = g.dim == 3 ? hi[2] : 0;
  for (int i = lo[0]; i <= hi[0]; ++i)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int k = k0; k <= k1; ++k) {
        const Vec x{g.coord(i), g.coord(j), g.dim == 3 ? g.coord(k) : 0.0};
        out.values[g.encode(i, j, k)] = f.eval(t, x);
      }
  return out;
}

// Spacetime quadrature of f * g over the support of f: Gauss-Legendre in
// time, trapezoidal tensor rule on the periodic lattice (exact cancellation
// outside the support makes the restriction to the support box lossless).
inline double integrate_spacetime(const TestFunction& f,
                                  const std::function<double(double, const Vec&)>& g,
                                  const SpatialGrid& grid, int time_nodes = 32) {
  check_sample_margin(f, grid);
  const auto quad = TimeQuadrature::gauss_legendre(f.t0, f.t_halfwidth, time_nodes);
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int a = 0; a < grid.dim; ++a)
    detail::axis_range(grid, f.center[a] - f.radius, f.center[a] + f.radius, lo[a], hi[a]);
  const int k0 = grid.dim == 3 ? lo[2] : 0;
  const int k1 = grid.dim == 3 ? hi[2] : 0;
  const double vol = grid.cell_volume();
  double acc = 0.0;
  for (int q = 0; q < quad.size(); ++q) {
    const double t = quad.nodes[q];
    double slice = 0.0;
    for (int i = lo[0]; i <= hi[0]; ++i)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int k = k0; k <= k1; ++k) {
          const Vec x{grid.coord(i), grid.coord(j), grid.dim == 3 ? grid.coord(k) : 0.0};
          const double fv = f.eval(t, x);
          if (fv != 0.0) slice += fv * g(t, x);
        }
    acc += quad.weights[q] * vol * slice;
  }
  return acc;
}

// Spacetime integral of f itself.
inline double integral(const TestFunction& f, const SpatialGrid& g, int time_nodes = 32) {
  return integrate_spacetime(f, [](double, const Vec&) { return 1.0; }, g, time_nodes);
}

// L1 norm of f (natural scale for pairing bounds).
inline double l1_norm(const TestFunction& f, const SpatialGrid& g, int time_nodes = 32) {
  TestFunction absf = f;
  absf.amplitude = std::abs(f.amplitude);
  return integral(absf, g, time_nodes);
}

}  // namespace kgops
