#pragma once

#include <string>

#include "kgops/config.hpp"

namespace kgtest {

inline std::string source_dir() { return KGOPS_SOURCE_DIR; }

inline const kgops::ScenarioConfig& default_config() {
  static const kgops::ScenarioConfig cfg =
      kgops::load_config(source_dir() + "/configs/default_d2.json");
  return cfg;
}

// Small fast grid for unit tests that do not pin values to N = 128.
inline kgops::KGParams small_params() {
  return kgops::KGParams(1.0, kgops::SpatialGrid::make(2, 64, 4.0), 32);
}

inline kgops::TestFunction bump(double cx, double cy, double rho, double t0, double T,
                                double amp = 1.0, int dim = 2) {
  kgops::TestFunction f;
  f.center = {cx, cy, 0.0};
  f.radius = rho;
  f.t0 = t0;
  f.t_halfwidth = T;
  f.amplitude = amp;
  f.dim = dim;
  return f;
}

// Adaptive Simpson quadrature, used as the independent radial-integration
// oracle.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-12, int depth = 24) {
  auto simpson = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  struct Rec {
    double lo, hi, whole;
    int depth;
  };
  const double whole = simpson(a, b);
  std::vector<Rec> stack{{a, b, whole, depth}};
  double total = 0.0;
  while (!stack.empty()) {
    const Rec r = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (r.lo + r.hi);
    const double left = simpson(r.lo, mid);
    const double right = simpson(mid, r.hi);
    if (r.depth <= 0 || std::abs(left + right - r.whole) < 15.0 * tol) {
      total += left + right + (left + right - r.whole) / 15.0;
    } else {
      stack.push_back({r.lo, mid, left, r.depth - 1});
      stack.push_back({mid, r.hi, right, r.depth - 1});
    }
  }
  return total;
}

}  // namespace kgtest
