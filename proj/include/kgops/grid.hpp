#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "kgops/errors.hpp"
#include "kgops/vec.hpp"

namespace kgops {

// Periodic spatial lattice on the box [-L, L)^d, N nodes per axis (power of
// two), spacing h = 2L/N. Storage is row-major over axes.
struct SpatialGrid {
  int dim = 2;
  int n = 128;
  double half_length = 4.0;

  static SpatialGrid make(int dim, int n, double half_length) {
    if (dim != 2 && dim != 3) throw ConfigError("grid dimension must be 2 or 3");
    if (n < 16 || (n & (n - 1)) != 0) throw ConfigError("grid size must be a power of two >= 16");
    if (half_length <= 0.0) throw ConfigError("grid half-length must be positive");
    return SpatialGrid{dim, n, half_length};
  }

  double spacing() const { return 2.0 * half_length / n; }
  std::size_t node_count() const {
    std::size_t c = 1;
    for (int i = 0; i < dim; ++i) c *= static_cast<std::size_t>(n);
    return c;
  }
  double coord(int i) const { return -half_length + spacing() * i; }
  // Signed momentum of FFT bin k: p = (pi/L) * k_signed.
  double momentum(int k) const {
    const int ks = k < n / 2 ? k : k - n;
    return M_PI / half_length * ks;
  }
  void decode(std::size_t flat, int idx[3]) const {
    idx[2] = 0;
    if (dim == 3) {
      idx[2] = static_cast<int>(flat % n);
      flat /= n;
    }
    idx[1] = static_cast<int>(flat % n);
    idx[0] = static_cast<int>(flat / n);
  }
  std::size_t encode(int i0, int i1, int i2 = 0) const {
    std::size_t f = static_cast<std::size_t>(i0) * n + i1;
    if (dim == 3) f = f * n + i2;
    return f;
  }
  Vec node(std::size_t flat) const {
    int idx[3];
    decode(flat, idx);
    return {coord(idx[0]), coord(idx[1]), dim == 3 ? coord(idx[2]) : 0.0};
  }
  double cell_volume() const { return std::pow(spacing(), dim); }

  bool operator==(const SpatialGrid&) const = default;
};

struct LatticeField {
  SpatialGrid grid;
  std::vector<double> values;

  explicit LatticeField(const SpatialGrid& g) : grid(g), values(g.node_count(), 0.0) {}
  LatticeField(const SpatialGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double l2_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s * grid.cell_volume());
  }
  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }

  LatticeField& operator+=(const LatticeField& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  LatticeField& operator-=(const LatticeField& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  LatticeField& operator*=(double s) {
    for (auto& v : values) v *= s;
    return *this;
  }
  friend LatticeField operator+(LatticeField a, const LatticeField& b) { return a += b; }
  friend LatticeField operator-(LatticeField a, const LatticeField& b) { return a -= b; }
  friend LatticeField operator*(LatticeField a, double s) { return a *= s; }

  void check_same_grid(const LatticeField& o) const {
    if (!(grid == o.grid)) throw GridMismatch("lattice fields live on different grids");
  }
};

// Exact lattice point reflection x -> -x on the listed axes
// (index i -> (N - i) mod N per axis).
inline LatticeField point_reflect(const LatticeField& f, std::initializer_list<int> axes) {
  LatticeField out(f.grid);
  const int n = f.grid.n;
  for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
    int idx[3];
    f.grid.decode(flat, idx);
    int j[3] = {idx[0], idx[1], idx[2]};
    for (int a : axes) j[a] = (n - idx[a]) % n;
    out.values[f.grid.encode(j[0], j[1], j[2])] = f.values[flat];
  }
  return out;
}

// Cyclic lattice shift by whole cells; offset[a] in cells, x -> x + offset*h.
inline LatticeField lattice_shift(const LatticeField& f, const int offset[3]) {
  LatticeField out(f.grid);
  const int n = f.grid.n;
  for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
    int idx[3];
    f.grid.decode(flat, idx);
    const int j0 = ((idx[0] + offset[0]) % n + n) % n;
    const int j1 = ((idx[1] + offset[1]) % n + n) % n;
    const int j2 = f.grid.dim == 3 ? ((idx[2] + offset[2]) % n + n) % n : 0;
    out.values[f.grid.encode(j0, j1, j2)] = f.values[flat];
  }
  return out;
}

}  // namespace kgops
