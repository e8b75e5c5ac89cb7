#pragma once

#include <complex>
#include <optional>

#include "kgops/geometry.hpp"
#include "kgops/green.hpp"
#include "kgops/quadrature.hpp"

namespace kgops {

// Convention lock for the Gaussian vacuum. The on-shell transform is
//   A_f(p) = sum_j w_j e^{+i omega_p t_j} (spatial DFT of f(t_j, .))(p)
// and the two-point function
//   w2(f, h) = (h^d / N^d) sum_p conj(A_f) A_h / (2 omega_p).
// With the causal-propagator orientation of green.hpp this gives the exact
// lattice identity 2 Im w2(f, h) = G(f, h), which pins the Fourier and
// measure normalizations. Weyl relations: W(f)W(h) = e^{-i G(f,h)/2} W(f+h),
// vacuum characteristic functional omega(W(f)) = e^{-w2(f,f)/2}.
struct VacuumContext {
  KGParams params;

  explicit VacuumContext(const KGParams& p) : params(p) {}
};

inline Spectrum onshell_amplitude(const TestFunction& f, const KGParams& params) {
  const SpatialGrid& g = params.grid;
  if (f.dim != g.dim) throw DimensionMismatch("test function dimension does not match grid");
  check_sample_margin(f, g);
  const auto om = omega_table(g, params.mass);
  const auto quad = TimeQuadrature::gauss_legendre(f.t0, f.t_halfwidth, params.time_nodes);
  Spectrum amp(g.node_count(), 0.0);
  for (int q = 0; q < quad.size(); ++q) {
    const double t = quad.nodes[q];
    const double w = quad.weights[q];
    Spectrum fhat = fft_of_field(sample(f, g, t));
    for (std::size_t i = 0; i < amp.size(); ++i)
      amp[i] += w * std::polar(1.0, om[i] * t) * fhat[i];
  }
  return amp;
}

namespace detail {

inline std::complex<double> w2_from_amplitudes(const Spectrum& a, const Spectrum& b,
                                               const KGParams& params,
                                               const std::vector<double>& om) {
  const SpatialGrid& g = params.grid;
  const double fac = g.cell_volume() / static_cast<double>(g.node_count());
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i] / (2.0 * om[i]);
  return fac * acc;
}

inline double g_from_amplitudes(const Spectrum& a, const Spectrum& b, const KGParams& params,
                                const std::vector<double>& om) {
  return 2.0 * w2_from_amplitudes(a, b, params, om).imag();
}

}  // namespace detail

inline std::complex<double> two_point(const TestFunction& f, const TestFunction& h,
                                      const VacuumContext& ctx) {
  const auto om = omega_table(ctx.params.grid, ctx.params.mass);
  return detail::w2_from_amplitudes(onshell_amplitude(f, ctx.params),
                                    onshell_amplitude(h, ctx.params), ctx.params, om);
}

// The c-number by which conjugation with W(h) shifts the field:
// W(h) Phi(f) W(h)* = Phi(f) + G(f, h).
inline double field_shift(const TestFunction& f, const TestFunction& h,
                          const VacuumContext& ctx) {
  return pairing_G(f, h, ctx.params);
}

// Product of Weyl operators with optional field-operator insertions.
// sign = +1 stands for W(f), sign = -1 for W(f)* = W(-f).
struct WeylWord {
  struct Factor {
    TestFunction fn;
    int sign = +1;
  };
  struct Insertion {
    TestFunction fn;
    std::size_t position = 0;  // number of Weyl factors applied to its left
  };
  std::vector<Factor> factors;
  std::vector<Insertion> insertions;

  static WeylWord conjugation(const TestFunction& h, const TestFunction& inserted) {
    WeylWord w;
    w.factors.push_back({h, +1});
    w.factors.push_back({h, -1});
    w.insertions.push_back({inserted, 1});
    return w;
  }
};

// Gaussian-state evaluation of a Weyl word: reduce to a single Weyl operator
// via the exchange phase, then apply the vacuum characteristic functional.
// Supports at most one field insertion (all scenario quantities need no
// more); pushing the insertion to the front yields the c-number shifts.
inline std::complex<double> weyl_vacuum(const WeylWord& word, const VacuumContext& ctx) {
  if (word.insertions.size() > 1)
    throw ConfigError("weyl_vacuum supports at most one field insertion");
  const SpatialGrid& g = ctx.params.grid;
  const auto om = omega_table(g, ctx.params.mass);

  std::complex<double> phase = 1.0;
  Spectrum total(g.node_count(), 0.0);
  double insertion_shift = 0.0;
  std::optional<Spectrum> inserted;
  std::size_t insert_pos = 0;
  if (!word.insertions.empty()) {
    inserted = onshell_amplitude(word.insertions[0].fn, ctx.params);
    insert_pos = word.insertions[0].position;
  }

  for (std::size_t k = 0; k < word.factors.size(); ++k) {
    Spectrum a = onshell_amplitude(word.factors[k].fn, ctx.params);
    if (word.factors[k].sign < 0)
      for (auto& z : a) z = -z;
    // W(G)W(a) = e^{-i G(G,a)/2} W(G+a)
    phase *= std::polar(1.0, -0.5 * detail::g_from_amplitudes(total, a, ctx.params, om));
    if (inserted && k < insert_pos)
      insertion_shift += detail::g_from_amplitudes(*inserted, a, ctx.params, om);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += a[i];
  }

  const std::complex<double> w2GG = detail::w2_from_amplitudes(total, total, ctx.params, om);
  const std::complex<double> gaussian = phase * std::exp(-0.5 * w2GG.real());
  if (!inserted) return gaussian;
  // omega(Phi(c) W(G)) = omega(W(G)) (G(G,c)/2 + i Re w2(G,c))
  const double gGc = detail::g_from_amplitudes(total, *inserted, ctx.params, om);
  const double rew2 = detail::w2_from_amplitudes(total, *inserted, ctx.params, om).real();
  return gaussian * (insertion_shift + std::complex<double>(0.5 * gGc, rew2));
}

// omega(T_n) - omega(W(h) T_n W(h)*) for T_n = (1 + Phi(f)^2/n)^{-1} Phi(f),
// evaluated exactly in the Gaussian vacuum: X ~ N(0, w2(f,f)),
// g_n(x) = x / (1 + x^2/n), shift a = G(f, h), by 128-node Gauss-Hermite.
inline double tn_expectation_defect(int n_reg, const TestFunction& f, const TestFunction& h,
                                    const VacuumContext& ctx, int hermite_nodes = 128) {
  if (n_reg < 1) throw ConfigError("Tn regularization index must be >= 1");
  const double variance = two_point(f, f, ctx).real();
  const double a = field_shift(f, h, ctx);
  const auto gn = [n = static_cast<double>(n_reg)](double x) { return x / (1.0 + x * x / n); };
  const double base = gauss_hermite_expectation(gn, variance, 0.0, hermite_nodes);
  const double shifted = gauss_hermite_expectation(gn, variance, a, hermite_nodes);
  return base - shifted;
}

struct QuantumScenarioResult {
  double baseline = 0.0;       // omega(Phi(c))
  double alice_only = 0.0;     // omega(W(h) Phi(c) W(h)*)
  double alice_and_bob = 0.0;  // omega(W(h) Phi(R_theta c) W(h)*)
  double tn_defect = 0.0;      // bounded-observable defect for C = T_n
  int tn_n = 1000;
};

// The three-step expectation chain with C = Phi(c). The localized rotation
// implementer acts like the global rotation unitary on everything inside
// O(r1) and the vacuum is rotation invariant, so conjugation replaces c by
// the rotated test function.
inline QuantumScenarioResult quantum_scenario(const TestFunction& c, const TestFunction& h,
                                              double theta, const ScenarioGeometry& geom,
                                              const VacuumContext& ctx, int tn_n = 1000) {
  if (!geom.function_in_cone(c, geom.ball_plus()))
    throw GeometryViolation("Charlie's test function must be supported in O(+)");
  if (!geom.function_in_cone(h, geom.ball_minus()))
    throw GeometryViolation("Alice's test function must be supported in O(-)");
  if (!are_spacelike(geom.o_plus(), geom.o_minus()))
    throw GeometryViolation("O(+) and O(-) must be spacelike separated");

  QuantumScenarioResult res;
  res.tn_n = tn_n;
  WeylWord bare;
  bare.insertions.push_back({c, 0});
  res.baseline = weyl_vacuum(bare, ctx).real();
  res.alice_only = weyl_vacuum(WeylWord::conjugation(h, c), ctx).real();
  const TestFunction rc = c.rotated(theta, geom.axis);
  res.alice_and_bob = weyl_vacuum(WeylWord::conjugation(h, rc), ctx).real();
  res.tn_defect = tn_expectation_defect(tn_n, rc, h, ctx);
  return res;
}

}  // namespace kgops
