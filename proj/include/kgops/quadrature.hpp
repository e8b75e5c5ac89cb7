#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "kgops/errors.hpp"

namespace kgops {

// Gauss-Legendre nodes and weights on [t0 - T, t0 + T]. Weights are positive
// and sum to 2T.
struct TimeQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;

  static TimeQuadrature gauss_legendre(double t0, double half_width, int m = 32) {
    if (m < 2) throw ConfigError("time quadrature needs at least 2 nodes");
    TimeQuadrature q;
    q.nodes.resize(m);
    q.weights.resize(m);
    // Newton iteration on P_m, symmetric roots.
    for (int i = 0; i < (m + 1) / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = m * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * pp * pp);
      q.nodes[i] = t0 - half_width * x;
      q.nodes[m - 1 - i] = t0 + half_width * x;
      q.weights[i] = half_width * w;
      q.weights[m - 1 - i] = half_width * w;
    }
    return q;
  }

  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Hermite nodes/weights (physicists' convention, weight exp(-x^2),
// weights sum to sqrt(pi)). Roots found by interlacing bisection + Newton on
// the orthonormal recurrence, stable up to a few hundred nodes.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  if (n < 1) throw ConfigError("gauss_hermite needs n >= 1");
  // Orthonormal Hermite value and derivative at x.
  auto eval = [](int deg, double x, double& dp) {
    // p_0 = pi^{-1/4}, p_{k+1} = (x sqrt(2) p_k - sqrt(k) p_{k-1}) / sqrt(k+1)
    double pm = 0.0, p = std::pow(M_PI, -0.25);
    for (int k = 0; k < deg; ++k) {
      const double pn = (x * std::sqrt(2.0) * p - std::sqrt(static_cast<double>(k)) * pm) /
                        std::sqrt(static_cast<double>(k + 1));
      pm = p;
      p = pn;
    }
    dp = std::sqrt(2.0 * deg) * pm;
    return p;
  };

  std::vector<double> prev{};  // roots of degree-(k-1) polynomial
  for (int deg = 1; deg <= n; ++deg) {
    std::vector<double> roots(deg);
    // Bracket roots of degree `deg` between the interlaced roots of deg-1,
    // padded with outer bounds.
    const double bound = std::sqrt(2.0 * deg + 1.0) + 2.0;
    std::vector<double> brackets;
    brackets.push_back(-bound);
    for (double r : prev) brackets.push_back(r);
    brackets.push_back(bound);
    for (int i = 0; i < deg; ++i) {
      double lo = brackets[i], hi = brackets[i + 1];
      double dp;
      double flo = eval(deg, lo, dp);
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(deg, mid, dp);
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
        if (hi - lo < 1e-13) break;
      }
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 50; ++it) {
        const double p = eval(deg, x, dp);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      roots[i] = x;
    }
    prev = std::move(roots);
  }

  std::vector<double> weights(n);
  for (int i = 0; i < n; ++i) {
    double dp;
    eval(n, prev[i], dp);
    // Christoffel weight: with p_n'(x_i) = sqrt(2n) p_{n-1}(x_i) the
    // Christoffel-Darboux sum collapses to w_i = 2 / p_n'(x_i)^2.
    weights[i] = 2.0 / (dp * dp);
  }
  return {prev, weights};
}

inline const std::pair<std::vector<double>, std::vector<double>>& gauss_hermite_cached(int n) {
  static std::mutex mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_hermite(n)).first;
  return it->second;
}

// Expectation E[g(X + shift)] for X ~ N(0, variance) by Gauss-Hermite.
template <typename G>
double gauss_hermite_expectation(const G& g, double variance, double shift, int nodes = 128) {
  const auto& [xs, ws] = gauss_hermite_cached(nodes);
  const double sd = std::sqrt(std::max(variance, 0.0)) * std::sqrt(2.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * g(sd * xs[i] + shift);
  return acc / std::sqrt(M_PI);
}

}  // namespace kgops
