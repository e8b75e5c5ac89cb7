#pragma once

#include <random>

#include "kgops/config.hpp"

namespace kgops {

// Deterministic random test-function ensembles for the property suites.
// All ranges scale with the box size so the same generator covers the d = 2
// and d = 3 configurations. Pairs come in two flavours: spacelike-separated
// supports and causally overlapping (time-staggered) supports.
class FunctionEnsemble {
 public:
  FunctionEnsemble(const ScenarioConfig& cfg, std::uint64_t salt = 0)
      : rng_(cfg.seed + salt), dim_(cfg.dimension), L_(cfg.grid_half_length) {}

  TestFunction random_function() {
    TestFunction f;
    f.dim = dim_;
    for (int a = 0; a < dim_; ++a) f.center[a] = uniform(-0.325 * L_, 0.325 * L_);
    f.radius = uniform(0.075 * L_, 0.125 * L_);
    f.t0 = uniform(-0.0625 * L_, 0.0625 * L_);
    f.t_halfwidth = uniform(0.015 * L_, 0.0375 * L_);
    f.amplitude = uniform(0.5, 2.0);
    return f;
  }

  // Supports with no causal curve between them.
  std::pair<TestFunction, TestFunction> spacelike_pair() {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      TestFunction f = random_function(), h = random_function();
      const double gap = distance(f.center, h.center) - f.radius - h.radius;
      const double tsep = std::abs(f.t0 - h.t0) + f.t_halfwidth + h.t_halfwidth;
      if (gap > tsep + 0.0375 * L_) return {f, h};
    }
    throw Error("failed to draw a spacelike pair");
  }

  // Strong causal overlap: nearby centers, time-staggered supports.
  std::pair<TestFunction, TestFunction> overlapping_pair() {
    Vec c0 = kZeroVec;
    for (int a = 0; a < dim_; ++a) c0[a] = uniform(-0.2 * L_, 0.2 * L_);
    auto draw = [&](double t_sign) {
      TestFunction f;
      f.dim = dim_;
      for (int a = 0; a < dim_; ++a) f.center[a] = c0[a] + uniform(-0.05 * L_, 0.05 * L_);
      f.radius = uniform(0.0875 * L_, 0.15 * L_);
      f.t0 = t_sign * uniform(0.025 * L_, 0.0625 * L_);
      f.t_halfwidth = uniform(0.02 * L_, 0.0375 * L_);
      f.amplitude = uniform(0.5, 2.0);
      return f;
    };
    return {draw(-1.0), draw(+1.0)};
  }

  // Random solution with causally overlapping source pair flavour.
  TestFunction solution_source() {
    TestFunction f = random_function();
    f.radius = uniform(0.0875 * L_, 0.15 * L_);
    return f;
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  int dim_;
  double L_;
};

}  // namespace kgops
