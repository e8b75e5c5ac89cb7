#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <variant>

#include "kgops/geometry.hpp"
#include "kgops/rotation.hpp"
#include "kgops/symplectic.hpp"

namespace kgops {

namespace detail {

// Exact ordering key for canonical form; test functions compare by their
// defining parameters.
inline auto fn_key(const TestFunction& f) {
  return std::tuple(f.center[0], f.center[1], f.center[2], f.radius, f.t0, f.t_halfwidth,
                    f.amplitude, f.plateau_fraction, f.dim);
}

inline bool fn_less(const TestFunction& a, const TestFunction& b) { return fn_key(a) < fn_key(b); }
inline bool fn_equal(const TestFunction& a, const TestFunction& b) { return fn_key(a) == fn_key(b); }

}  // namespace detail

// Finite sums of products of linear functionals F_f plus multiples of the
// unit; the polynomial observable algebra. Terms are kept in canonical form:
// factors sorted, identical factor lists merged.
struct PolynomialFunctional {
  struct Term {
    std::complex<double> coeff{1.0, 0.0};
    std::vector<TestFunction> factors;  // empty -> multiple of the unit
  };
  std::vector<Term> terms;

  static PolynomialFunctional unit(std::complex<double> c = 1.0) {
    PolynomialFunctional p;
    p.terms.push_back({c, {}});
    return p;
  }
  static PolynomialFunctional zero() { return {}; }
  static PolynomialFunctional generator(const TestFunction& f) {
    PolynomialFunctional p;
    p.terms.push_back({1.0, {f}});
    return p;
  }

  int degree() const {
    std::size_t d = 0;
    for (const auto& t : terms) d = std::max(d, t.factors.size());
    return static_cast<int>(d);
  }

  void canonicalize() {
    for (auto& t : terms) std::sort(t.factors.begin(), t.factors.end(), detail::fn_less);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size();
      for (std::size_t i = 0; i < a.factors.size(); ++i) {
        if (!detail::fn_equal(a.factors[i], b.factors[i]))
          return detail::fn_less(a.factors[i], b.factors[i]);
      }
      return false;
    });
    std::vector<Term> merged;
    for (auto& t : terms) {
      if (!merged.empty() && merged.back().factors.size() == t.factors.size()) {
        bool same = true;
        for (std::size_t i = 0; i < t.factors.size() && same; ++i)
          same = detail::fn_equal(merged.back().factors[i], t.factors[i]);
        if (same) {
          merged.back().coeff += t.coeff;
          continue;
        }
      }
      merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == std::complex<double>(0.0, 0.0); });
    terms = std::move(merged);
  }

  PolynomialFunctional& operator+=(const PolynomialFunctional& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    canonicalize();
    return *this;
  }
  friend PolynomialFunctional operator+(PolynomialFunctional a, const PolynomialFunctional& b) {
    return a += b;
  }
  PolynomialFunctional& operator*=(std::complex<double> c) {
    for (auto& t : terms) t.coeff *= c;
    canonicalize();
    return *this;
  }
  friend PolynomialFunctional operator*(PolynomialFunctional a, std::complex<double> c) {
    return a *= c;
  }
  friend PolynomialFunctional operator*(const PolynomialFunctional& a,
                                        const PolynomialFunctional& b) {
    PolynomialFunctional out;
    for (const auto& ta : a.terms)
      for (const auto& tb : b.terms) {
        Term t;
        t.coeff = ta.coeff * tb.coeff;
        t.factors = ta.factors;
        t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
        out.terms.push_back(std::move(t));
      }
    out.canonicalize();
    return out;
  }

  PolynomialFunctional star() const {
    PolynomialFunctional out = *this;
    for (auto& t : out.terms) t.coeff = std::conj(t.coeff);
    return out;
  }

  bool structurally_equal(const PolynomialFunctional& o, double coeff_tol = 0.0) const {
    PolynomialFunctional a = *this, b = o;
    a.canonicalize();
    b.canonicalize();
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
      if (a.terms[i].factors.size() != b.terms[i].factors.size()) return false;
      for (std::size_t j = 0; j < a.terms[i].factors.size(); ++j)
        if (!detail::fn_equal(a.terms[i].factors[j], b.terms[i].factors[j])) return false;
      if (std::abs(a.terms[i].coeff - b.terms[i].coeff) > coeff_tol) return false;
    }
    return true;
  }
};

// Dirac state delta_{phi0}: evaluation plugs the base solution into the
// functional; multiplicative by construction.
struct DiracState {
  KGParams params;
  std::optional<Solution> base;  // nullopt means the zero solution

  static DiracState vacuum(const KGParams& p) { return {p, std::nullopt}; }
  static DiracState at(const KGParams& p, Solution phi0) { return {p, std::move(phi0)}; }
};

inline std::complex<double> eval_functional(const PolynomialFunctional& P, const DiracState& nu) {
  std::complex<double> acc = 0.0;
  for (const auto& term : P.terms) {
    std::complex<double> prod = term.coeff;
    for (const auto& f : term.factors) {
      if (!nu.base.has_value()) {
        prod = 0.0;
        break;
      }
      prod *= linear_functional(f, *nu.base, nu.params.time_nodes);
    }
    acc += prod;
  }
  return acc;
}

inline double eval_functional_real(const PolynomialFunctional& P, const DiracState& nu) {
  return eval_functional(P, nu).real();
}

// Peierls bracket via bilinear extension from generators,
// {F_f, F_h} = kappa(f, h) * 1, and the Leibniz rule on products.
inline PolynomialFunctional peierls_bracket(const PolynomialFunctional& P,
                                            const PolynomialFunctional& Q,
                                            const KGParams& params) {
  PolynomialFunctional out;
  for (const auto& tp : P.terms)
    for (const auto& tq : Q.terms)
      for (std::size_t i = 0; i < tp.factors.size(); ++i)
        for (std::size_t j = 0; j < tq.factors.size(); ++j) {
          const double k = kappa(tp.factors[i], tq.factors[j], params);
          PolynomialFunctional::Term t;
          t.coeff = tp.coeff * tq.coeff * k;
          for (std::size_t a = 0; a < tp.factors.size(); ++a)
            if (a != i) t.factors.push_back(tp.factors[a]);
          for (std::size_t b = 0; b < tq.factors.size(); ++b)
            if (b != j) t.factors.push_back(tq.factors[b]);
          out.terms.push_back(std::move(t));
        }
  out.canonicalize();
  return out;
}

// Channels. The rotation channel is the pullback by S_theta^{-1}; it may be
// conjugated with a lattice translation to act about an off-origin center.
// The kick channel is the dual of the state shift phi -> phi + G f_A.
struct RotationChannel {
  LocalizedRotation rot;
  Vec center = kZeroVec;
};
struct KickChannel {
  TestFunction source;  // psi_A = G(source)
};
using ClassicalChannel = std::variant<RotationChannel, KickChannel>;

namespace detail {

inline Ball channel_outer_ball(const RotationChannel& ch, int dim) {
  return Ball{ch.center, ch.rot.r2, dim};
}
inline Ball channel_inner_ball(const RotationChannel& ch, int dim) {
  return Ball{ch.center, ch.rot.r1, dim};
}

// Functional-side image of a generator under the rotation channel. Exact for
// supports inside D(B(r1)+center) (pure rotation of the test function) and
// for supports spacelike from O(r2)+center (identity); anything straddling
// the transition shell leaves the generator form.
inline TestFunction rotate_generator(const RotationChannel& ch, const TestFunction& f) {
  if (ch.rot.theta == 0.0) return f;
  const double dist = distance(f.center, ch.center);
  const double reach = f.radius + f.time_extent();
  if (dist + reach < ch.rot.r1) {
    TestFunction shifted = f.translated(scale(ch.center, -1.0));
    shifted = shifted.rotated(ch.rot.theta, ch.rot.axis);
    return shifted.translated(ch.center);
  }
  if (dist - reach >= ch.rot.r2) return f;
  throw UnsupportedLocalization(
      "generator support straddles the rotation transition shell; use the state-side action");
}

inline void lattice_offset_for(const Vec& center, const SpatialGrid& g, int offset[3]) {
  const double h = g.spacing();
  for (int a = 0; a < 3; ++a) {
    const double cells = center[a] / h;
    offset[a] = static_cast<int>(std::llround(cells));
    if (std::abs(cells - offset[a]) > 1e-9)
      throw UnsupportedLocalization("rotation center must lie on the lattice");
  }
}

}  // namespace detail

// Functional side: (Upsilon P)(phi) = P(M^{-1} phi) extended multiplicatively
// over terms. Rotation maps F_f to F_{R_theta f}; the kick adds the constant
// sigma(Gf, psi_A) per generator.
inline PolynomialFunctional apply_channel(const ClassicalChannel& ch,
                                          const PolynomialFunctional& P,
                                          const KGParams& params) {
  PolynomialFunctional out;
  if (std::holds_alternative<RotationChannel>(ch)) {
    const auto& rc = std::get<RotationChannel>(ch);
    for (const auto& term : P.terms) {
      PolynomialFunctional::Term t;
      t.coeff = term.coeff;
      for (const auto& f : term.factors) t.factors.push_back(detail::rotate_generator(rc, f));
      out.terms.push_back(std::move(t));
    }
    out.canonicalize();
    return out;
  }
  const auto& kick = std::get<KickChannel>(ch);
  const Solution psi = green_solution(kick.source, params);
  PolynomialFunctional acc = PolynomialFunctional::zero();
  for (const auto& term : P.terms) {
    PolynomialFunctional prod = PolynomialFunctional::unit(term.coeff);
    for (const auto& f : term.factors) {
      const double shift = linear_functional(f, psi, params.time_nodes);
      PolynomialFunctional gen = PolynomialFunctional::generator(f);
      gen += PolynomialFunctional::unit(shift);
      prod = prod * gen;
    }
    acc += prod;
  }
  return acc;
}

// State side (dual action on Dirac base points): rotations pull the base
// point through S_theta^{-1}; kicks add psi_A. Always well defined, no
// localization restrictions; this is the numerical workhorse.
inline DiracState apply_channel_to_state(const ClassicalChannel& ch, const DiracState& nu) {
  const KGParams& params = nu.params;
  if (std::holds_alternative<KickChannel>(ch)) {
    const auto& kick = std::get<KickChannel>(ch);
    Solution psi = green_solution(kick.source, params);
    if (nu.base.has_value()) psi += *nu.base;
    return DiracState::at(params, std::move(psi));
  }
  const auto& rc = std::get<RotationChannel>(ch);
  if (!nu.base.has_value()) return nu;  // the zero field is rotation invariant
  LocalizedRotation inverse_rot = rc.rot;
  inverse_rot.theta = -rc.rot.theta;
  CauchyData data = nu.base->data();
  int offset[3];
  detail::lattice_offset_for(rc.center, params.grid, offset);
  const int neg[3] = {-offset[0], -offset[1], -offset[2]};
  // Conjugate with the lattice shift moving the rotation center to the origin.
  LatticeField u = lattice_shift(data.u, neg);
  LatticeField v = lattice_shift(data.v, neg);
  CauchyData rotated = apply_S(inverse_rot, {std::move(u), std::move(v)});
  LatticeField ub = lattice_shift(rotated.u, offset);
  LatticeField vb = lattice_shift(rotated.v, offset);
  Solution out(params, {std::move(ub), std::move(vb)});
  out.declare_support_radius(
      std::max(nu.base->support_radius(), norm(rc.center) + rc.rot.r2));
  return DiracState::at(params, std::move(out));
}

// |eval({Up P, Up Q}, nu) - eval(Up {P, Q}, nu)|; the bracket-preservation
// defect of the channel.
inline double bracket_preservation_check(const ClassicalChannel& ch,
                                         const PolynomialFunctional& P,
                                         const PolynomialFunctional& Q, const DiracState& nu,
                                         const KGParams& params) {
  const PolynomialFunctional up = apply_channel(ch, P, params);
  const PolynomialFunctional uq = apply_channel(ch, Q, params);
  const auto lhs = eval_functional(peierls_bracket(up, uq, params), nu);
  const auto rhs = eval_functional(apply_channel(ch, peierls_bracket(P, Q, params), params), nu);
  return std::abs(lhs - rhs);
}

// Causal-channel criterion: the localization of every generator image must
// lie inside J(O_channel union supp f). Checked on a deterministic sample of
// the image support cylinder.
inline bool channel_locality_check(const ClassicalChannel& ch, const TestFunction& f,
                                   const KGParams& params, int samples_per_axis = 5) {
  PolynomialFunctional image;
  try {
    image = apply_channel(ch, PolynomialFunctional::generator(f), params);
  } catch (const UnsupportedLocalization&) {
    return true;  // no functional-side image to localize; state side only
  }
  std::optional<DoubleCone> channel_region;
  if (std::holds_alternative<RotationChannel>(ch)) {
    const auto& rc = std::get<RotationChannel>(ch);
    channel_region = double_cone(detail::channel_outer_ball(rc, f.dim));
  } else {
    const auto& kick = std::get<KickChannel>(ch);
    channel_region = double_cone(
        Ball{kick.source.center, kick.source.radius + kick.source.time_extent(), f.dim});
  }
  auto in_J_of_support = [&](const TestFunction& src, const Point& p) {
    return distance(p.x, src.center) - src.radius <= std::abs(p.t - src.t0) + src.t_halfwidth;
  };
  for (const auto& term : image.terms) {
    for (const auto& gfn : term.factors) {
      for (int it = 0; it < 3; ++it) {
        const double t = gfn.t0 + (it - 1) * gfn.t_halfwidth;
        for (int i = 0; i < samples_per_axis; ++i)
          for (int j = 0; j < samples_per_axis; ++j)
            for (int k = 0; k < (f.dim == 3 ? samples_per_axis : 1); ++k) {
              Vec x = gfn.center;
              x[0] += gfn.radius * (2.0 * i / (samples_per_axis - 1) - 1.0);
              x[1] += gfn.radius * (2.0 * j / (samples_per_axis - 1) - 1.0);
              if (f.dim == 3) x[2] += gfn.radius * (2.0 * k / (samples_per_axis - 1) - 1.0);
              if (distance(x, gfn.center) > gfn.radius) continue;
              const Point p{t, x, f.dim};
              if (!in_causal_set(*channel_region, p) && !in_J_of_support(f, p)) return false;
            }
      }
    }
  }
  return true;
}

}  // namespace kgops
