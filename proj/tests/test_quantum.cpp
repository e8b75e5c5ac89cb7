#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kgops/ensembles.hpp"
#include "kgops/quantum.hpp"

using namespace kgops;
using kgtest::bump;

TEST_CASE("two-point function basics", "[quantum]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const VacuumContext vac(cfg.params());
  FunctionEnsemble ens(cfg, 53);

  // w2(f, f) is real and nonnegative
  for (int i = 0; i < 5; ++i) {
    const auto w = two_point(ens.random_function(), ens.random_function(), vac);
    (void)w;
    const TestFunction f = ens.random_function();
    const auto self = two_point(f, f, vac);
    CHECK(std::abs(self.imag()) < 1e-15 * std::abs(self.real()) + 1e-300);
    CHECK(self.real() >= 0.0);
  }

  // Cauchy-Schwarz
  for (int i = 0; i < 5; ++i) {
    const auto [f, h] = ens.overlapping_pair();
    const double prod = two_point(f, f, vac).real() * two_point(h, h, vac).real();
    CHECK(std::norm(two_point(f, h, vac)) <= prod * (1.0 + 1e-12));
  }
}

TEST_CASE("normalization lock: 2 Im w2 = G", "[quantum]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  const VacuumContext vac(params);
  FunctionEnsemble ens(cfg, 59);
  for (int i = 0; i < 8; ++i) {
    const auto [f, h] = ens.overlapping_pair();
    const double g = pairing_G(f, h, params);
    CHECK(std::abs(2.0 * two_point(f, h, vac).imag() - g) <= 1e-5 * std::abs(g));
  }
}

TEST_CASE("vacuum rotation invariance", "[quantum]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const VacuumContext vac(cfg.params());
  const TestFunction c = cfg.function("charlie");

  const TestFunction rc = c.rotated(M_PI / 5.0, 2);  // not a lattice symmetry
  CHECK(std::abs(two_point(rc, rc, vac).real() - two_point(c, c, vac).real()) < 1e-6);

  const TestFunction rpi = c.rotated(M_PI, 2);  // lattice-exact
  CHECK(std::abs(two_point(rpi, rpi, vac).real() - two_point(c, c, vac).real()) <
        1e-13 * two_point(c, c, vac).real());
}

TEST_CASE("weyl vacuum evaluation", "[quantum]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const VacuumContext vac(cfg.params());
  const TestFunction f = cfg.function("alice_kick");
  const TestFunction h = bump(-0.9, 0.2, 0.35, 0.1, 0.1, 1.4);

  // empty word
  CHECK(weyl_vacuum(WeylWord{}, vac) == std::complex<double>(1.0, 0.0));

  // unitarity: omega(W(h) W(h)*) = 1
  WeylWord ww;
  ww.factors.push_back({h, +1});
  ww.factors.push_back({h, -1});
  CHECK(std::abs(weyl_vacuum(ww, vac) - 1.0) < 1e-10);

  // vacuum characteristic functional omega(W(f)) = exp(-w2(f,f)/2)
  WeylWord single;
  single.factors.push_back({f, +1});
  const double expected = std::exp(-0.5 * two_point(f, f, vac).real());
  CHECK(std::abs(weyl_vacuum(single, vac) - expected) < 1e-12);

  // exchange relation applied twice: ratio of the two orderings
  WeylWord fh, hf;
  fh.factors.push_back({f, +1});
  fh.factors.push_back({h, +1});
  hf.factors.push_back({h, +1});
  hf.factors.push_back({f, +1});
  const auto ratio = weyl_vacuum(fh, vac) / weyl_vacuum(hf, vac);
  const auto phase = std::polar(1.0, -pairing_G(f, h, vac.params));
  CHECK(std::abs(ratio - phase) < 1e-6);

  WeylWord overloaded;
  overloaded.insertions.push_back({f, 0});
  overloaded.insertions.push_back({h, 0});
  CHECK_THROWS_AS(weyl_vacuum(overloaded, vac), ConfigError);
}

TEST_CASE("field shift under weyl conjugation", "[quantum]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  const VacuumContext vac(params);
  FunctionEnsemble ens(cfg, 61);

  // G(f, f) = 0 and spacelike pairs shift by nothing
  const TestFunction f = cfg.function("charlie");
  CHECK(std::abs(field_shift(f, f, vac)) <
        1e-8 * l1_norm(f, params.grid) * l1_norm(f, params.grid));
  const auto [a, b] = ens.spacelike_pair();
  CHECK(std::abs(field_shift(a, b, vac)) <
        1e-8 * l1_norm(a, params.grid) * l1_norm(b, params.grid));

  // omega([Phi(f), W(h)] W(h)*) = -G(f, h), via the word machinery
  const auto [c, h] = ens.overlapping_pair();
  WeylWord plain;
  plain.insertions.push_back({c, 0});
  const double lhs =
      weyl_vacuum(plain, vac).real() - weyl_vacuum(WeylWord::conjugation(h, c), vac).real();
  const double g = pairing_G(c, h, params);
  CHECK(std::abs(lhs + g) < 1e-10 * std::abs(g));
}

TEST_CASE("Tn regularization defects", "[quantum]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  const VacuumContext vac(params);
  FunctionEnsemble ens(cfg, 67);

  // spacelike: odd integrand against the centered gaussian
  const auto [a, b] = ens.spacelike_pair();
  CHECK(std::abs(tn_expectation_defect(100, a, b, vac)) < 1e-10);

  // scenario pair: monotone onset in n and the large-n limit -G(Rc, h)
  const TestFunction rc = cfg.function("charlie").rotated(cfg.geometry.theta, 2);
  const TestFunction h = cfg.function("alice_kick");
  const double g = pairing_G(rc, h, params);
  double prev = -1.0;
  for (int n : {1, 10, 100, 1000}) {
    const double d = std::abs(tn_expectation_defect(n, rc, h, vac));
    if (prev >= 0.0) CHECK(d >= prev);
    prev = d;
  }
  const double d1000 = tn_expectation_defect(1000, rc, h, vac);
  CHECK(std::abs(d1000 + g) <= 0.1 * std::abs(g));

  CHECK_THROWS_AS(tn_expectation_defect(0, rc, h, vac), ConfigError);
}

TEST_CASE("quantum scenario", "[quantum]") {
  const ScenarioConfig& cfg = kgtest::default_config();
  const KGParams params = cfg.params();
  const VacuumContext vac(params);
  const TestFunction c = cfg.function("charlie");
  const TestFunction h = cfg.function("alice_kick");

  const auto res = quantum_scenario(c, h, cfg.geometry.theta, cfg.geometry, vac, 1000);
  const double scale = l1_norm(c, params.grid) * l1_norm(h, params.grid);
  CHECK(std::abs(res.baseline) < 1e-14);
  CHECK(std::abs(res.alice_only) < 1e-8 * scale);
  CHECK(std::abs(res.alice_and_bob) > 1e-3 * scale);

  // with Bob switched off nothing reaches Charlie
  const auto off = quantum_scenario(c, h, 0.0, cfg.geometry, vac, 1000);
  CHECK(std::abs(off.alice_and_bob - off.alice_only) < 1e-14);
  CHECK(std::abs(off.alice_only) < 1e-8 * scale);

  // cross-check against the green pairing route
  const TestFunction rc = c.rotated(cfg.geometry.theta, cfg.geometry.axis);
  CHECK(std::abs(res.alice_and_bob - pairing_G(rc, h, params)) <
        1e-10 * std::abs(res.alice_and_bob));

  // geometry preconditions are enforced
  const TestFunction outsider = kgtest::bump(0.0, 0.0, 0.4, 0.25, 0.1);
  CHECK_THROWS_AS(quantum_scenario(outsider, h, M_PI, cfg.geometry, vac, 10), GeometryViolation);
}
