#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kgops/ensembles.hpp"
#include "kgops/green.hpp"
#include "kgops/validation.hpp"

using namespace kgops;
using kgtest::bump;

TEST_CASE("green data basics", "[green]") {
  const KGParams params = kgtest::small_params();

  // linearity: zero source gives zero data
  const CauchyData zero = green_cauchy_data(bump(0, 0, 0.5, 0, 0.2, 0.0), params);
  CHECK(zero.max_abs() == 0.0);

  CHECK_THROWS_AS(KGParams(0.0, params.grid), MassNonPositive);
  CHECK_THROWS_AS(KGParams(-1.0, params.grid), MassNonPositive);
}

TEST_CASE("causal spreading of green data", "[green]") {
  // source strictly in t in [1, 2]: its data at t = 0 live in |x| <= rho + 2
  const KGParams params(1.0, SpatialGrid::make(2, 256, 4.0), 96);
  const TestFunction f = bump(0.0, 0.0, 1.0, 1.5, 0.5);
  const CauchyData data = green_cauchy_data(f, params);
  const double reach = f.radius + f.time_extent() + 2.0 * params.grid.spacing();
  const double peak = data.max_abs();
  double outside = 0.0;
  for (std::size_t i = 0; i < data.u.values.size(); ++i) {
    if (norm(params.grid.node(i)) > reach)
      outside = std::max({outside, std::abs(data.u.values[i]), std::abs(data.v.values[i])});
  }
  CHECK(outside < peak * 1e-8);
}

TEST_CASE("time parity of the green kernel", "[green]") {
  // time-symmetric source: the sin kernel is odd, so u vanishes
  const KGParams params = kgtest::small_params();
  const CauchyData data = green_cauchy_data(bump(0.3, 0.1, 0.5, 0.0, 0.15), params);
  CHECK(data.u.max_abs() <= 1e-10 * data.v.max_abs());
}

TEST_CASE("spectral evolution", "[green]") {
  const KGParams params = kgtest::small_params();
  const Solution sol = green_solution(bump(0.2, -0.3, 0.5, 0.1, 0.2), params);

  // t = 0 returns the stored data
  const CauchyData d0 = sol.data();
  const LatticeField u0 = sol.field_at(0.0);
  LatticeField diff = u0;
  diff -= d0.u;
  CHECK(diff.max_abs() < 1e-14 * d0.max_abs());

  // group property: evolve there and back
  const CauchyData back = sol.evolved(0.8).evolved(-0.8).data();
  LatticeField du = back.u;
  du -= d0.u;
  CHECK(du.max_abs() < 1e-10 * d0.max_abs());

  // causal margin guard
  CHECK_THROWS_AS(sol.field_at(50.0), CausalMarginExceeded);
}

TEST_CASE("leapfrog oracle", "[green]") {
  const KGParams params = kgtest::small_params();
  const CauchyData zero = CauchyData::zero(params.grid);
  const CauchyData still = leapfrog_evolve(zero, params.mass, 1.0, 64);
  CHECK(still.max_abs() == 0.0);

  // CFL condition is enforced
  const CauchyData data = green_cauchy_data(bump(0.2, -0.3, 0.6, 0.0, 0.15), params);
  CHECK_THROWS_AS(leapfrog_evolve(data, params.mass, 1.0, 3), CFLViolation);
}

TEST_CASE("leapfrog energy conservation over t=2", "[green][slow]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  CHECK(energy_conservation_defect(cfg) < 1e-6);
}

TEST_CASE("leapfrog matches spectral evolution", "[green][slow]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const auto mis = leapfrog_mismatch(cfg);  // N = 128 default
  CHECK(mis.rel_l2 < 1e-3);
  // refinement halves h and dt: second-order decay
  const auto fine = leapfrog_mismatch(cfg, 256);
  CHECK(std::log2(mis.rel_l2 / fine.rel_l2) > 1.5);
}

TEST_CASE("pairing antisymmetry and causality", "[green]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();

  const TestFunction f = cfg.function("charlie");
  const double self = pairing_G(f, f, params);
  const double scale = l1_norm(f, params.grid) * l1_norm(f, params.grid);
  CHECK(std::abs(self) < 1e-8 * scale);

  FunctionEnsemble ens(cfg, 7);
  for (int i = 0; i < 4; ++i) {
    const auto [a, b] = ens.overlapping_pair();
    const double gab = pairing_G(a, b, params);
    const double gba = pairing_G(b, a, params);
    CHECK(std::abs(gab + gba) <
          1e-8 * l1_norm(a, params.grid) * l1_norm(b, params.grid));
  }
  for (int i = 0; i < 4; ++i) {
    const auto [a, b] = ens.spacelike_pair();
    CHECK(std::abs(pairing_G(a, b, params)) <
          1e-8 * l1_norm(a, params.grid) * l1_norm(b, params.grid));
  }
}

TEST_CASE("klein-gordon residual of evolve slices is second order", "[green]") {
  const KGParams params = kgtest::small_params();
  const Solution phi = green_solution(bump(0.1, 0.2, 0.6, 0.0, 0.15), params);
  auto residual = [&](double dt) {
    const LatticeField up = phi.field_at(0.4 + dt);
    const LatticeField u0 = phi.field_at(0.4);
    const LatticeField um = phi.field_at(0.4 - dt);
    LatticeField res = spectral_laplacian(u0);
    for (std::size_t i = 0; i < res.values.size(); ++i) {
      const double utt = (up.values[i] - 2.0 * u0.values[i] + um.values[i]) / (dt * dt);
      res.values[i] = utt - res.values[i] + params.mass * params.mass * u0.values[i];
    }
    return res.l2_norm();
  };
  const double r1 = residual(2e-2), r2 = residual(1e-2);
  CHECK(std::log2(r1 / r2) > 1.5);
}
