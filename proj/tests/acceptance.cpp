// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Full mode runs the twelve d=2 criteria on the default config; --smoke runs
// the reduced subset sized for the d=3 grid within its config tolerances.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "kgops/scenario.hpp"

using namespace kgops;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

void criterion_1_2_causality(const ScenarioConfig& cfg, int n_spacelike, int n_control) {
  const auto st = causality_stats(cfg, n_spacelike, n_control);
  const double ratio = st.max_spacelike / st.max_control;
  report(1, "causality of the pairing over random spacelike pairs",
         ratio <= cfg.tolerance("causality_ratio") &&
             st.min_control_scale >= cfg.tolerance("control_scale_min"),
         fmt("spacelike/control = %.3e, min control scale = %.3e", ratio, st.min_control_scale));
  report(2, "antisymmetry of the pairing",
         st.max_antisymmetry <= cfg.tolerance("antisymmetry_rel"),
         fmt("max |G(f,h)+G(h,f)|/scale = %.3e vs %.1e", st.max_antisymmetry,
             cfg.tolerance("antisymmetry_rel")));
}

void criterion_3_chain(const ScenarioConfig& cfg, int pairs) {
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 401);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const auto [f, h] = ens.overlapping_pair();
    const double k = kappa(f, h, params);
    const double s = sigma(green_cauchy_data(f, params), green_cauchy_data(h, params));
    const double lf = linear_functional(f, green_solution(h, params), params.time_nodes);
    worst = std::max(worst, std::abs(lf - k) / std::abs(k));
    worst = std::max(worst, std::abs(k - s) / std::abs(k));
  }
  report(3, "symplectic identity chain F_f = kappa = sigma(Gf, Gh)",
         worst <= cfg.tolerance("identity_chain_rel"),
         fmt("max defect %.3e vs %.1e", worst, cfg.tolerance("identity_chain_rel")));
}

void criterion_4_jacobian(const ScenarioConfig& cfg) {
  FunctionEnsemble ens(cfg, 402);
  LocalizedRotation rot{cfg.geometry.r1, cfg.geometry.r2, cfg.geometry.theta, cfg.geometry.axis};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = (i % 2 == 0) ? ens.uniform(cfg.geometry.r1, cfg.geometry.r2)
                                  : ens.uniform(0.0, cfg.geometry.r2 + 1.0);
    const double ang = ens.uniform(0.0, 2.0 * M_PI);
    Vec x{r * std::cos(ang), r * std::sin(ang), 0.0};
    if (cfg.dimension == 3) x[2] = ens.uniform(-0.5, 0.5) * r;
    worst = std::max(worst, std::abs(jacobian_det(rot, x, cfg.dimension) - 1.0));
  }
  report(4, "volume preservation q_theta == 1 including the transition shell",
         worst <= cfg.tolerance("jacobian_unit"),
         fmt("max |q-1| = %.3e vs %.1e", worst, cfg.tolerance("jacobian_unit")));
}

void criterion_5_sigma_invariance(const ScenarioConfig& cfg) {
  const double coarse = sigma_invariance_defect(cfg, 20, M_PI / 3.0);
  const double fine = sigma_invariance_defect(cfg, 20, M_PI / 3.0, cfg.grid_n * 2);
  const bool decreasing = fine <= coarse / std::pow(2.0, 2.5);
  report(5, "sigma invariance of S_theta with interpolation-order refinement",
         coarse <= cfg.tolerance("sigma_invariance_rel") && decreasing,
         fmt("defect %.3e at base grid, %.3e refined", coarse, fine));
}

void criterion_6_bracket_preservation(const ScenarioConfig& cfg) {
  const KGParams params = cfg.params();
  FunctionEnsemble ens(cfg, 403);
  auto inner = [&](TestFunction f) {
    const double s = 0.3 * cfg.geometry.r1 / (f.spatial_extent() + f.time_extent());
    f.center = scale(f.center, s);
    f.radius *= s;
    f.t0 *= 0.5;
    return f;
  };
  const TestFunction f = inner(ens.random_function());
  const TestFunction h = inner(ens.random_function());
  const DiracState nu = DiracState::at(params, green_solution(ens.solution_source(), params));
  const PolynomialFunctional P = PolynomialFunctional::generator(f);
  const PolynomialFunctional Q = PolynomialFunctional::generator(h);
  const double defect = bracket_preservation_check(cfg.bob_channel(), P, Q, nu, params);
  const double scale_v = std::abs(kappa(f, h, params)) +
                         1e-3 * l1_norm(f, params.grid) * l1_norm(h, params.grid);
  const ClassicalChannel kick = KickChannel{cfg.function(cfg.alice.type == "kick"
                                                             ? cfg.alice.function_id
                                                             : cfg.charlie.function_id)};
  const PolynomialFunctional lhs =
      peierls_bracket(apply_channel(kick, P, params), apply_channel(kick, Q, params), params);
  const PolynomialFunctional rhs =
      apply_channel(kick, peierls_bracket(P, Q, params), params);
  const bool kick_structural = lhs.structurally_equal(rhs, 1e-14 * scale_v);
  report(6, "bracket preservation by the rotation and kick channels",
         defect <= cfg.tolerance("bracket_preservation_rel") * scale_v && kick_structural,
         fmt("rotation defect %.3e vs scale %.3e; kick structural", defect, scale_v));
}

void criterion_7_channel_locality(const ScenarioConfig& cfg) {
  const KGParams params = cfg.params();
  const ClassicalChannel bob = cfg.bob_channel();
  const TestFunction& w = cfg.function(cfg.witness_id);
  const PolynomialFunctional Fw = PolynomialFunctional::generator(w);
  const bool fixes = apply_channel(bob, Fw, params).structurally_equal(Fw);

  // state-side check of the fixed point on a nonzero state
  FunctionEnsemble ens(cfg, 404);
  const DiracState nu = DiracState::at(params, green_solution(ens.solution_source(), params));
  const double drift = std::abs(eval_functional(Fw, apply_channel_to_state(bob, nu)).real() -
                                eval_functional(Fw, nu).real());
  const double wit_scale = std::max(std::abs(eval_functional(Fw, nu).real()), 1.0);

  bool predicate = true;
  const ClassicalChannel kick = KickChannel{cfg.function(cfg.charlie.function_id)};
  for (int i = 0; i < 10; ++i) {
    const TestFunction f = ens.random_function();
    predicate = predicate && channel_locality_check(bob, f, params) &&
                channel_locality_check(kick, f, params);
  }
  // The functional action fixes the witness structurally (defect exactly 0
  // against the 1e-10 gate); the state route drifts only at the resolved
  // tail level and carries its own tolerance.
  const double structural_defect = fixes ? 0.0 : 1.0;
  report(7, "channel locality: spacelike fixed points and the causal-set predicate",
         structural_defect <= cfg.tolerance("channel_fix_spacelike") &&
             drift <= cfg.tolerance("witness_state_drift") * wit_scale && predicate,
         fmt("structural defect %.1e, state-route drift %.3e", structural_defect, drift));
}

void criterion_8_classical_scenario(const ScenarioConfig& cfg) {
  const ClassicalBlock block = run_classical(cfg);
  ScenarioConfig off = cfg;
  off.geometry.theta = 0.0;
  const ClassicalBlock quiet = run_classical(off);
  const bool collapse = std::abs(quiet.alice_only - quiet.baseline) <= 1e-8 &&
                        std::abs(quiet.alice_and_bob - quiet.baseline) <= 1e-8;
  report(8, "classical scenario: no signaling without Bob, signal with Bob",
         block.pass && collapse,
         fmt("no-signaling %.3e, signal/scale %.3e", block.no_signaling_defect,
             block.signal / block.signal_scale));
}

void criterion_9_normalization(const ScenarioConfig& cfg, int pairs) {
  const KGParams params = cfg.params();
  const VacuumContext vac(params);
  FunctionEnsemble ens(cfg, 405);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const auto [f, h] = ens.overlapping_pair();
    const double g = pairing_G(f, h, params);
    worst = std::max(worst, std::abs(2.0 * two_point(f, h, vac).imag() - g) / std::abs(g));
  }
  report(9, "quantum convention lock 2 Im w2 = G",
         worst <= cfg.tolerance("normalization_lock_rel"),
         fmt("max defect %.3e vs %.1e", worst, cfg.tolerance("normalization_lock_rel")));
}

void criterion_10_11_quantum(const ScenarioConfig& cfg) {
  const QuantumBlock block = run_quantum(cfg);
  report(10, "quantum scenario: vacuum rotation invariance and the signal chain",
         block.pass,
         fmt("no-signaling %.3e, signal/scale %.3e", block.no_signaling_defect,
             block.signal / block.signal_scale));

  const KGParams params = cfg.params();
  const VacuumContext vac(params);
  FunctionEnsemble ens(cfg, 406);
  const auto [a, b] = ens.spacelike_pair();
  const double tn_zero = std::abs(tn_expectation_defect(cfg.charlie.tn_n, a, b, vac));
  report(11, "Tn defect: zero for spacelike pairs, -G(Rc,h) at large n",
         tn_zero <= cfg.tolerance("tn_spacelike") &&
             block.tn_large_n_gap <= cfg.tolerance("tn_large_n_rel"),
         fmt("spacelike %.3e, large-n gap %.3e", tn_zero, block.tn_large_n_gap));
}

void criterion_12_oracle(const ScenarioConfig& cfg) {
  const auto base = leapfrog_mismatch(cfg);
  const auto mid = leapfrog_mismatch(cfg, cfg.grid_n * 2);
  const auto fine = leapfrog_mismatch(cfg, cfg.grid_n * 4);
  const double order1 = std::log2(base.rel_l2 / mid.rel_l2);
  const double order2 = std::log2(mid.rel_l2 / fine.rel_l2);
  report(12, "leapfrog/spectral oracle agreement with second-order convergence",
         base.rel_l2 <= cfg.tolerance("oracle_mismatch_rel") && order1 >= 1.5 && order2 >= 1.5,
         fmt("mismatch %.3e, orders %.2f", base.rel_l2, 0.5 * (order1 + order2)));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: kgops_acceptance <config.json> [--smoke]\n");
    return 2;
  }
  const bool smoke = argc > 2 && std::strcmp(argv[2], "--smoke") == 0;

  ScenarioConfig cfg;
  try {
    cfg = load_config(argv[1]);
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
      for (const auto& v : violations) std::fprintf(stderr, "config violation: %s\n", v.c_str());
      return 2;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (smoke) {
      // Reduced ensemble sizes for the d=3 grid; tolerances come from the
      // smoke config itself.
      criterion_1_2_causality(cfg, 10, 6);
      criterion_3_chain(cfg, 4);
      criterion_4_jacobian(cfg);
      criterion_8_classical_scenario(cfg);
      criterion_9_normalization(cfg, 6);
      criterion_10_11_quantum(cfg);
    } else {
      criterion_1_2_causality(cfg, 50, 20);
      criterion_3_chain(cfg, 20);
      criterion_4_jacobian(cfg);
      criterion_5_sigma_invariance(cfg);
      criterion_6_bracket_preservation(cfg);
      criterion_7_channel_locality(cfg);
      criterion_8_classical_scenario(cfg);
      criterion_9_normalization(cfg, 30);
      criterion_10_11_quantum(cfg);
      criterion_12_oracle(cfg);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error while running criteria: %s\n", e.what());
    return 2;
  }

  if (failures == 0) {
    std::printf("all acceptance criteria pass\n");
    return 0;
  }
  std::printf("%d criterion/criteria FAILED\n", failures);
  return 1;
}
