#pragma once

#include <complex>
#include <memory>

#include "kgops/fft.hpp"
#include "kgops/fields.hpp"

namespace kgops {

struct KGParams {
  double mass = 1.0;
  SpatialGrid grid;
  int time_nodes = 32;

  KGParams(double m, const SpatialGrid& g, int nodes = 32) : mass(m), grid(g), time_nodes(nodes) {
    if (!(mass > 0.0)) throw MassNonPositive("mass must be strictly positive");
  }
};

struct CauchyData {
  LatticeField u;  // field value at t = 0
  LatticeField v;  // normal derivative at t = 0

  CauchyData(LatticeField u_, LatticeField v_) : u(std::move(u_)), v(std::move(v_)) {
    u.check_same_grid(v);
  }
  static CauchyData zero(const SpatialGrid& g) { return {LatticeField(g), LatticeField(g)}; }

  const SpatialGrid& grid() const { return u.grid; }
  double max_abs() const { return std::max(u.max_abs(), v.max_abs()); }
};

// Sign conventions. The causal propagator is fixed by the mode kernel
//   G(t - t', p) = -sin(omega_p (t - t')) / omega_p,
// the orientation for which the symplectic identities hold verbatim with
// sigma(phi, psi) = integral(u_phi v_psi - v_phi u_psi):
//   F_f(phi) = sigma(Gf, phi),   kappa(f, h) = sigma(Gf, Gh),
// and on the quantum side 2 Im w2(f, h) = G(f, h) with the on-shell
// transform taken at e^{+i omega t}. Flipping any one sign breaks the chain.
inline CauchyData green_cauchy_data(const TestFunction& f, const KGParams& params) {
  const SpatialGrid& g = params.grid;
  if (f.dim != g.dim) throw DimensionMismatch("test function dimension does not match grid");
  check_sample_margin(f, g);
  // Data of Gf live inside J(supp f) at t = 0; require them interior too.
  const double data_extent = f.spatial_extent() + f.time_extent();
  if (data_extent > g.half_length - 2.0 * g.spacing())
    throw CausalMarginExceeded("Cauchy data of Gf would touch the box boundary");

  const auto om = omega_table(g, params.mass);
  const auto quad = TimeQuadrature::gauss_legendre(f.t0, f.t_halfwidth, params.time_nodes);
  Spectrum uhat(g.node_count(), 0.0), vhat(g.node_count(), 0.0);
  for (int q = 0; q < quad.size(); ++q) {
    const double t = quad.nodes[q];
    const double w = quad.weights[q];
    Spectrum fhat = fft_of_field(sample(f, g, t));
    for (std::size_t i = 0; i < fhat.size(); ++i) {
      uhat[i] += w * std::sin(om[i] * t) / om[i] * fhat[i];
      vhat[i] += -w * std::cos(om[i] * t) * fhat[i];
    }
  }
  return {field_from_spectrum(g, std::move(uhat)), field_from_spectrum(g, std::move(vhat))};
}

// Homogeneous solution determined by Cauchy data at t = 0, evaluated by
// spectral propagation. Immutable; spectra cached at construction.
class Solution {
 public:
  Solution(const KGParams& params, const CauchyData& data)
      : grid_(params.grid),
        mass_(params.mass),
        omega_(omega_table(params.grid, params.mass)),
        uhat_(fft_of_field(data.u)),
        vhat_(fft_of_field(data.v)),
        support_radius_(measure_support_radius(data)) {}

  static Solution zero(const KGParams& params) {
    return Solution(params, CauchyData::zero(params.grid));
  }

  const SpatialGrid& grid() const { return grid_; }
  double mass() const { return mass_; }
  double support_radius() const { return support_radius_; }
  void declare_support_radius(double r) { support_radius_ = r; }

  CauchyData data_at(double t) const {
    check_margin(t);
    Spectrum ut(uhat_.size()), vt(vhat_.size());
    for (std::size_t i = 0; i < uhat_.size(); ++i) {
      const double c = std::cos(omega_[i] * t);
      const double s = std::sin(omega_[i] * t);
      ut[i] = uhat_[i] * c + vhat_[i] * (s / omega_[i]);
      vt[i] = -uhat_[i] * (omega_[i] * s) + vhat_[i] * c;
    }
    return {field_from_spectrum(grid_, std::move(ut)), field_from_spectrum(grid_, std::move(vt))};
  }

  LatticeField field_at(double t) const {
    check_margin(t);
    Spectrum ut(uhat_.size());
    for (std::size_t i = 0; i < uhat_.size(); ++i) {
      const double c = std::cos(omega_[i] * t);
      const double s = std::sin(omega_[i] * t);
      ut[i] = uhat_[i] * c + vhat_[i] * (s / omega_[i]);
    }
    return field_from_spectrum(grid_, std::move(ut));
  }

  CauchyData data() const { return data_at(0.0); }

  // Time-translated solution: the mode update applied to the cached spectra,
  // with the support radius widened by the causal spreading |t|.
  Solution evolved(double t) const {
    check_margin(t);
    Solution out = *this;
    for (std::size_t i = 0; i < uhat_.size(); ++i) {
      const double c = std::cos(omega_[i] * t);
      const double s = std::sin(omega_[i] * t);
      out.uhat_[i] = uhat_[i] * c + vhat_[i] * (s / omega_[i]);
      out.vhat_[i] = -uhat_[i] * (omega_[i] * s) + vhat_[i] * c;
    }
    out.support_radius_ = support_radius_ + std::abs(t);
    return out;
  }

  Solution& operator+=(const Solution& o) {
    if (!(grid_ == o.grid_)) throw GridMismatch("solutions on different grids");
    for (std::size_t i = 0; i < uhat_.size(); ++i) {
      uhat_[i] += o.uhat_[i];
      vhat_[i] += o.vhat_[i];
    }
    support_radius_ = std::max(support_radius_, o.support_radius_);
    return *this;
  }
  friend Solution operator+(Solution a, const Solution& b) { return a += b; }
  Solution& operator*=(double s) {
    for (std::size_t i = 0; i < uhat_.size(); ++i) {
      uhat_[i] *= s;
      vhat_[i] *= s;
    }
    return *this;
  }

 private:
  void check_margin(double t) const {
    if (support_radius_ + std::abs(t) > grid_.half_length - 2.0 * grid_.spacing())
      throw CausalMarginExceeded("evolution would push support into the periodic boundary");
  }

  // Radius of the smallest origin-centered ball holding everything above
  // 1e-6 of the data maximum; spectral tails below that are ignored for the
  // causal-margin bookkeeping.
  double measure_support_radius(const CauchyData& data) const {
    const double thresh = 1e-6 * data.max_abs();
    if (thresh == 0.0) return 0.0;
    double r = 0.0;
    for (std::size_t i = 0; i < data.u.values.size(); ++i) {
      if (std::abs(data.u.values[i]) > thresh || std::abs(data.v.values[i]) > thresh)
        r = std::max(r, norm(grid_.node(i)));
    }
    return r;
  }

  SpatialGrid grid_;
  double mass_;
  std::vector<double> omega_;
  Spectrum uhat_, vhat_;
  double support_radius_;
};

inline Solution green_solution(const TestFunction& f, const KGParams& params) {
  Solution sol(params, green_cauchy_data(f, params));
  sol.declare_support_radius(f.spatial_extent() + f.time_extent());
  return sol;
}

inline LatticeField evolve(const Solution& sol, double t) { return sol.field_at(t); }

// Second-order staggered leapfrog with the standard 2d+1 finite-difference
// Laplacian; deliberately independent of the spectral route (different
// dispersion), used as a cross-oracle.
inline CauchyData leapfrog_evolve(const CauchyData& data, double mass, double t, int steps) {
  if (steps < 1) throw ConfigError("leapfrog needs at least one step");
  const SpatialGrid& g = data.grid();
  const double h = g.spacing();
  const double dt = t / steps;
  if (std::abs(dt) > h / std::sqrt(static_cast<double>(g.dim)) * (1.0 + 1e-12))
    throw CFLViolation("time step exceeds h/sqrt(d)");

  const double inv_h2 = 1.0 / (h * h);
  const double m2 = mass * mass;
  const int n = g.n;
  auto wrap_up = [n](int i) { return i + 1 < n ? i + 1 : 0; };
  auto wrap_dn = [n](int i) { return i > 0 ? i - 1 : n - 1; };
  auto accel = [&](const LatticeField& u, LatticeField& out) {
    const double* uv = u.values.data();
    double* ov = out.values.data();
    if (g.dim == 2) {
      for (int i = 0; i < n; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * n;
        const std::size_t up = static_cast<std::size_t>(wrap_up(i)) * n;
        const std::size_t dn = static_cast<std::size_t>(wrap_dn(i)) * n;
        for (int j = 0; j < n; ++j) {
          const double lap = uv[up + j] + uv[dn + j] + uv[row + wrap_up(j)] +
                             uv[row + wrap_dn(j)] - 4.0 * uv[row + j];
          ov[row + j] = lap * inv_h2 - m2 * uv[row + j];
        }
      }
    } else {
      const std::size_t nn = static_cast<std::size_t>(n) * n;
      for (int i = 0; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i) * nn;
        const std::size_t si_up = static_cast<std::size_t>(wrap_up(i)) * nn;
        const std::size_t si_dn = static_cast<std::size_t>(wrap_dn(i)) * nn;
        for (int j = 0; j < n; ++j) {
          const std::size_t sj = static_cast<std::size_t>(j) * n;
          const std::size_t sj_up = static_cast<std::size_t>(wrap_up(j)) * n;
          const std::size_t sj_dn = static_cast<std::size_t>(wrap_dn(j)) * n;
          for (int k = 0; k < n; ++k) {
            const std::size_t c = si + sj + k;
            const double lap = uv[si_up + sj + k] + uv[si_dn + sj + k] + uv[si + sj_up + k] +
                               uv[si + sj_dn + k] + uv[si + sj + wrap_up(k)] +
                               uv[si + sj + wrap_dn(k)] - 6.0 * uv[c];
            ov[c] = lap * inv_h2 - m2 * uv[c];
          }
        }
      }
    }
  };

  LatticeField um = data.u;
  LatticeField acc(g);
  accel(um, acc);
  LatticeField up = um;
  for (std::size_t i = 0; i < up.values.size(); ++i)
    up.values[i] += dt * data.v.values[i] + 0.5 * dt * dt * acc.values[i];
  for (int s = 1; s < steps; ++s) {
    accel(up, acc);
    for (std::size_t i = 0; i < up.values.size(); ++i) {
      const double un = 2.0 * up.values[i] - um.values[i] + dt * dt * acc.values[i];
      um.values[i] = up.values[i];
      up.values[i] = un;
    }
  }
  accel(up, acc);
  LatticeField v(g);
  for (std::size_t i = 0; i < v.values.size(); ++i)
    v.values[i] = (up.values[i] - um.values[i]) / dt + 0.5 * dt * acc.values[i];
  return {std::move(up), std::move(v)};
}

// Discrete energy (1/2) sum (v^2 + |grad u|^2 + m^2 u^2) h^d with forward
// differences for the gradient.
inline double field_energy(const CauchyData& data, double mass) {
  const SpatialGrid& g = data.grid();
  const double h = g.spacing();
  const int n = g.n;
  double e = 0.0;
  for (std::size_t flat = 0; flat < data.u.values.size(); ++flat) {
    int idx[3];
    g.decode(flat, idx);
    const double u = data.u.values[flat];
    const double v = data.v.values[flat];
    double gsq = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      int jp[3] = {idx[0], idx[1], idx[2]};
      jp[a] = (idx[a] + 1) % n;
      const double du = (data.u.values[g.encode(jp[0], jp[1], jp[2])] - u) / h;
      gsq += du * du;
    }
    e += v * v + gsq + mass * mass * u * u;
  }
  return 0.5 * e * g.cell_volume();
}

// G(f, h) = integral of f * (Gh) over spacetime: quadrature of f against the
// solution Gh evolved to f's time nodes.
inline double pairing_G(const TestFunction& f, const TestFunction& h, const KGParams& params) {
  const Solution gh = green_solution(h, params);
  check_sample_margin(f, params.grid);
  const auto quad = TimeQuadrature::gauss_legendre(f.t0, f.t_halfwidth, params.time_nodes);
  const double vol = params.grid.cell_volume();
  double acc = 0.0;
  for (int q = 0; q < quad.size(); ++q) {
    const LatticeField slice = gh.field_at(quad.nodes[q]);
    const LatticeField fs = sample(f, params.grid, quad.nodes[q]);
    double dotv = 0.0;
    for (std::size_t i = 0; i < fs.values.size(); ++i)
      if (fs.values[i] != 0.0) dotv += fs.values[i] * slice.values[i];
    acc += quad.weights[q] * vol * dotv;
  }
  return acc;
}

}  // namespace kgops
