#pragma once

#include "kgops/green.hpp"

namespace kgops {

// Symplectic form on Cauchy data over the flat t = 0 surface:
// sigma(a, b) = sum (u_a v_b - v_a u_b) h^d.
inline double sigma(const CauchyData& a, const CauchyData& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("sigma needs data on a common grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.u.values.size(); ++i)
    acc += a.u.values[i] * b.v.values[i] - a.v.values[i] * b.u.values[i];
  return acc * a.grid().cell_volume();
}

// Class pairing on test functions; kappa([f],[h]) = integral f * (Gh).
inline double kappa(const TestFunction& f, const TestFunction& h, const KGParams& params) {
  return pairing_G(f, h, params);
}

// F_f(phi) = integral phi * f over the support of f. Satisfies
// F_f(phi) = sigma(Gf, phi).
inline double linear_functional(const TestFunction& f, const Solution& phi, int time_nodes = 32) {
  if (f.dim != phi.grid().dim) throw DimensionMismatch("functional / solution dimension mismatch");
  check_sample_margin(f, phi.grid());
  const auto quad = TimeQuadrature::gauss_legendre(f.t0, f.t_halfwidth, time_nodes);
  const double vol = phi.grid().cell_volume();
  double acc = 0.0;
  for (int q = 0; q < quad.size(); ++q) {
    const LatticeField slice = phi.field_at(quad.nodes[q]);
    const LatticeField fs = sample(f, phi.grid(), quad.nodes[q]);
    double dotv = 0.0;
    for (std::size_t i = 0; i < fs.values.size(); ++i)
      if (fs.values[i] != 0.0) dotv += fs.values[i] * slice.values[i];
    acc += quad.weights[q] * vol * dotv;
  }
  return acc;
}

}  // namespace kgops
