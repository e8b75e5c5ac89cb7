#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kgops/classical.hpp"
#include "kgops/ensembles.hpp"

using namespace kgops;
using kgtest::bump;

namespace {

// Independent bracket oracle: {P, Q}(phi0) = d/ds P(phi0 + s G(dQ/dphi))|_0
// with the functional derivative of Q assembled symbolically and the
// directional derivative taken by central differences of the full nonlinear
// evaluation.
double bracket_oracle(const PolynomialFunctional& P, const PolynomialFunctional& Q,
                      const DiracState& nu, const KGParams& params) {
  // dQ/dphi at phi0 is a finite list of (coefficient, test function)
  std::vector<std::pair<double, TestFunction>> derivative;
  for (const auto& term : Q.terms) {
    for (std::size_t i = 0; i < term.factors.size(); ++i) {
      double coeff = term.coeff.real();
      for (std::size_t j = 0; j < term.factors.size(); ++j) {
        if (j == i) continue;
        coeff *= nu.base ? linear_functional(term.factors[j], *nu.base, params.time_nodes) : 0.0;
      }
      derivative.emplace_back(coeff, term.factors[i]);
    }
  }
  Solution direction = Solution::zero(params);
  for (const auto& [coeff, fn] : derivative) {
    Solution g = green_solution(fn, params);
    g *= coeff;
    direction += g;
  }
  const double s = 1e-3;
  Solution up = nu.base ? *nu.base : Solution::zero(params);
  Solution dn = up;
  Solution step_up = direction;
  step_up *= s;
  up += step_up;
  Solution step_dn = direction;
  step_dn *= -s;
  dn += step_dn;
  const double fp = eval_functional(P, DiracState::at(params, up)).real();
  const double fm = eval_functional(P, DiracState::at(params, dn)).real();
  return (fp - fm) / (2.0 * s);
}

}  // namespace

TEST_CASE("functional evaluation and dirac states", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();

  const DiracState vacuum = DiracState::vacuum(params);
  CHECK(eval_functional(PolynomialFunctional::unit(), vacuum) == std::complex<double>(1.0, 0.0));

  const TestFunction f = cfg.function("charlie");
  CHECK(eval_functional(PolynomialFunctional::generator(f), vacuum) ==
        std::complex<double>(0.0, 0.0));

  // product evaluation equals the product of pairings at a Dirac state
  const TestFunction h = cfg.function("alice_kick");
  const TestFunction g = bump(0.1, 0.2, 0.4, -0.1, 0.1);
  const DiracState nu = DiracState::at(params, green_solution(g, params));
  const auto prod = eval_functional(
      PolynomialFunctional::generator(f) * PolynomialFunctional::generator(h), nu);
  const double kf = kappa(f, g, params);
  const double kh = kappa(h, g, params);
  CHECK(std::abs(prod.real() - kf * kh) <= 1e-6 * std::abs(kf * kh) + 1e-14);

  // multiplicativity nu(PQ) = nu(P) nu(Q)
  FunctionEnsemble ens(cfg, 23);
  for (int i = 0; i < 3; ++i) {
    PolynomialFunctional P = PolynomialFunctional::generator(ens.random_function()) +
                             PolynomialFunctional::unit(0.3);
    PolynomialFunctional Q = PolynomialFunctional::generator(ens.random_function());
    const auto lhs = eval_functional(P * Q, nu);
    const auto rhs = eval_functional(P, nu) * eval_functional(Q, nu);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("star structure and canonical form", "[classical]") {
  const TestFunction f = bump(0.2, 0.1, 0.4, 0.0, 0.1);
  const TestFunction h = bump(-0.1, 0.3, 0.5, 0.1, 0.12);
  PolynomialFunctional P = PolynomialFunctional::generator(f) * std::complex<double>(0.0, 2.0);
  P += PolynomialFunctional::generator(h);
  const PolynomialFunctional Pss = P.star().star();
  CHECK(Pss.structurally_equal(P));
  // commutative product: factor order is irrelevant after canonicalization
  const PolynomialFunctional fh =
      PolynomialFunctional::generator(f) * PolynomialFunctional::generator(h);
  const PolynomialFunctional hf =
      PolynomialFunctional::generator(h) * PolynomialFunctional::generator(f);
  CHECK(fh.structurally_equal(hf));
}

TEST_CASE("peierls bracket on generators", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 29);
  const auto [f, h] = ens.overlapping_pair();

  // {F_f, F_h} = kappa(f, h) 1
  const auto br = peierls_bracket(PolynomialFunctional::generator(f),
                                  PolynomialFunctional::generator(h), params);
  REQUIRE(br.terms.size() == 1);
  CHECK(br.terms[0].factors.empty());
  CHECK(std::abs(br.terms[0].coeff.real() - kappa(f, h, params)) <
        1e-12 * std::abs(kappa(f, h, params)));

  // {P, 1} = 0 for any P
  const auto with_unit = peierls_bracket(PolynomialFunctional::generator(f),
                                         PolynomialFunctional::unit(3.0), params);
  CHECK(with_unit.terms.empty());
}

TEST_CASE("leibniz rule against the directional-derivative oracle", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 31);
  const auto [f, h] = ens.overlapping_pair();
  const auto [g, base] = ens.overlapping_pair();

  const DiracState nu = DiracState::at(params, green_solution(base, params));
  const PolynomialFunctional P = PolynomialFunctional::generator(f);
  const PolynomialFunctional QR =
      PolynomialFunctional::generator(h) * PolynomialFunctional::generator(g);

  const double structural = eval_functional(peierls_bracket(P, QR, params), nu).real();
  const double expected = kappa(f, h, params) *
                              linear_functional(g, *nu.base, params.time_nodes) +
                          kappa(f, g, params) *
                              linear_functional(h, *nu.base, params.time_nodes);
  CHECK(std::abs(structural - expected) <= 1e-8 * std::max(std::abs(expected), 1e-8));

  const double oracle = bracket_oracle(P, QR, nu, params);
  CHECK(std::abs(structural - oracle) <= 1e-6 * std::max(std::abs(structural), 1e-6));
}

TEST_CASE("jacobi identity at dirac states", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 37);
  const auto [f, h] = ens.overlapping_pair();
  const auto [g, base] = ens.overlapping_pair();
  const DiracState nu = DiracState::at(params, green_solution(base, params));
  const auto P = PolynomialFunctional::generator(f);
  const auto Q = PolynomialFunctional::generator(h);
  const auto R = PolynomialFunctional::generator(g);
  const auto total = eval_functional(peierls_bracket(P, peierls_bracket(Q, R, params), params), nu) +
                     eval_functional(peierls_bracket(Q, peierls_bracket(R, P, params), params), nu) +
                     eval_functional(peierls_bracket(R, peierls_bracket(P, Q, params), params), nu);
  CHECK(std::abs(total) < 1e-9);
}

TEST_CASE("rotation channel on functionals", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  const ClassicalChannel bob = cfg.bob_channel();
  const ScenarioGeometry& geom = cfg.geometry;

  // supp c in O(+): the image is the rotated generator, localized in O(-)
  const TestFunction c = cfg.function("charlie");
  const auto image = apply_channel(bob, PolynomialFunctional::generator(c), params);
  REQUIRE(image.terms.size() == 1);
  REQUIRE(image.terms[0].factors.size() == 1);
  const TestFunction& rc = image.terms[0].factors[0];
  CHECK(distance(rc.center, Vec{-c.center[0], -c.center[1], 0.0}) < 1e-12);
  CHECK(geom.function_in_cone(rc, geom.ball_minus()));

  // spacelike functionals are fixed, structurally
  const TestFunction w = cfg.function("witness");
  const auto fixed = apply_channel(bob, PolynomialFunctional::generator(w), params);
  CHECK(fixed.structurally_equal(PolynomialFunctional::generator(w)));

  // straddling the transition shell leaves the generator form
  const TestFunction straddle = bump(2.1, 0.0, 0.3, 0.0, 0.1);
  CHECK_THROWS_AS(apply_channel(bob, PolynomialFunctional::generator(straddle), params),
                  UnsupportedLocalization);
}

TEST_CASE("kick channel on functionals", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  const TestFunction fA = cfg.function("alice_kick");
  const ClassicalChannel kick = KickChannel{fA};

  // spacelike test function: the shift constant vanishes by causal support
  const TestFunction c = cfg.function("charlie");
  const auto moved = apply_channel(kick, PolynomialFunctional::generator(c), params);
  double unit_coeff = 0.0;
  bool generator_kept = false;
  for (const auto& t : moved.terms) {
    if (t.factors.empty()) unit_coeff = std::abs(t.coeff);
    if (t.factors.size() == 1) generator_kept = true;
  }
  CHECK(generator_kept);
  const double scale = l1_norm(c, params.grid) * l1_norm(fA, params.grid);
  CHECK(unit_coeff < 1e-8 * scale);

  // overlapping test function: the shift equals sigma(Gf, psi_A)
  const TestFunction probe = bump(-1.0, 0.0, 0.3, 0.2, 0.1);
  const auto shifted = apply_channel(kick, PolynomialFunctional::generator(probe), params);
  const Solution psi = green_solution(fA, params);
  const double expected = linear_functional(probe, psi, params.time_nodes);
  double measured = 0.0;
  for (const auto& t : shifted.terms)
    if (t.factors.empty()) measured = t.coeff.real();
  CHECK(std::abs(measured - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("state-side channel action", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  const ClassicalChannel bob = cfg.bob_channel();
  const ClassicalChannel kick = KickChannel{cfg.function("alice_kick")};

  // rotation fixes the zero field
  const DiracState vac = DiracState::vacuum(params);
  const DiracState still = apply_channel_to_state(bob, vac);
  CHECK_FALSE(still.base.has_value());

  // kick moves delta_0 to delta_{psi_A}
  const DiracState kicked = apply_channel_to_state(kick, vac);
  REQUIRE(kicked.base.has_value());
  const TestFunction probe = bump(-1.0, 0.0, 0.3, 0.2, 0.1);
  const Solution psi = green_solution(cfg.function("alice_kick"), params);
  CHECK(std::abs(linear_functional(probe, *kicked.base, params.time_nodes) -
                 linear_functional(probe, psi, params.time_nodes)) < 1e-13);
}

TEST_CASE("functional-side and state-side routes agree", "[classical][slow]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 41);
  const ClassicalChannel bob = cfg.bob_channel();
  const ClassicalChannel kick = KickChannel{cfg.function("alice_kick")};

  for (int i = 0; i < 5; ++i) {
    TestFunction f = ens.random_function();
    const double shrink = 0.35 * cfg.geometry.r1 / (f.spatial_extent() + f.time_extent());
    f.center = scale(f.center, shrink);
    f.radius *= shrink;
    const DiracState nu = DiracState::at(params, green_solution(ens.solution_source(), params));
    const PolynomialFunctional P = PolynomialFunctional::generator(f);
    for (const ClassicalChannel* ch : {&bob, &kick}) {
      const auto functional_route = eval_functional(apply_channel(*ch, P, params), nu).real();
      const auto state_route = eval_functional(P, apply_channel_to_state(*ch, nu)).real();
      CHECK(std::abs(functional_route - state_route) <=
            1e-5 * std::max({std::abs(functional_route), std::abs(state_route), 1e-9}));
    }
  }
}

TEST_CASE("bracket preservation by channels", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 43);

  // generators inside O(r1)
  auto shrink_into_inner = [&](TestFunction f) {
    const double s = 0.3 * cfg.geometry.r1 / (f.spatial_extent() + f.time_extent());
    f.center = scale(f.center, s);
    f.radius *= s;
    f.t0 *= 0.5;
    return f;
  };
  const TestFunction f = shrink_into_inner(ens.random_function());
  const TestFunction h = shrink_into_inner(ens.random_function());
  const DiracState nu = DiracState::at(params, green_solution(ens.solution_source(), params));
  const PolynomialFunctional P = PolynomialFunctional::generator(f);
  const PolynomialFunctional Q = PolynomialFunctional::generator(h);

  const ClassicalChannel bob = cfg.bob_channel();
  const double defect = bracket_preservation_check(bob, P, Q, nu, params);
  const double scale_v = std::abs(kappa(f, h, params)) +
                         l1_norm(f, params.grid) * l1_norm(h, params.grid) * 1e-3;
  CHECK(defect <= 1e-4 * scale_v);

  // theta = 0: no defect at all
  RotationChannel trivial = std::get<RotationChannel>(bob);
  trivial.rot.theta = 0.0;
  CHECK(bracket_preservation_check(ClassicalChannel{trivial}, P, Q, nu, params) == 0.0);

  // kick channel: brackets of generators are constants, kicks shift by
  // constants, so preservation is structural
  const ClassicalChannel kick = KickChannel{cfg.function("alice_kick")};
  CHECK(bracket_preservation_check(kick, P, Q, nu, params) < 1e-10);
}

TEST_CASE("channel locality predicate", "[classical]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 47);
  const ClassicalChannel bob = cfg.bob_channel();
  const ClassicalChannel kick = KickChannel{cfg.function("alice_kick")};
  for (int i = 0; i < 10; ++i) {
    const TestFunction f = ens.random_function();
    CHECK(channel_locality_check(bob, f, params));
    CHECK(channel_locality_check(kick, f, params));
  }
}
