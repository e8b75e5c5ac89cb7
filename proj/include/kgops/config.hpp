#pragma once

#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "kgops/classical.hpp"
#include "kgops/geometry.hpp"
#include "kgops/green.hpp"

namespace kgops {

using json = nlohmann::json;

inline constexpr int kConfigSchemaVersion = 1;

// Default tolerances; a config may override any entry. Every pass/fail row
// in a report references one of these keys, and the merged map is echoed
// into the report so each run is self-describing.
inline std::map<std::string, double> default_tolerances() {
  return {
      {"causality_ratio", 1e-8},
      {"control_scale_min", 1e-3},
      {"antisymmetry_rel", 1e-8},
      {"identity_chain_rel", 1e-5},
      {"jacobian_unit", 1e-6},
      {"sigma_invariance_rel", 1e-3},
      {"bracket_preservation_rel", 1e-4},
      {"channel_fix_spacelike", 1e-10},
      {"witness_state_drift", 1e-8},
      {"no_signaling", 1e-8},
      {"signal_min_ratio", 1e-3},
      {"normalization_lock_rel", 1e-5},
      {"vacuum_rotation_invariance", 1e-6},
      {"tn_spacelike", 1e-10},
      {"tn_large_n_rel", 0.1},
      {"oracle_mismatch_rel", 1e-3},
      {"surface_independence_rel", 1e-5},
      {"kerg_quotient_rel", 1e-5},
      {"equivariance_rel", 1e-4},
      {"localization_fix", 1e-10},
      {"group_law", 1e-10},
      {"rotate_roundtrip", 1e-12},
      {"bilinearity_rel", 1e-10},
      {"rotation_covariance_rel", 1e-6},
      {"jacobi", 1e-9},
      {"bracket_causality", 1e-8},
      {"cross_route_rel", 1e-5},
      {"energy_conservation_rel", 1e-6},
      {"kg_residual_order_min", 1.5},
      {"gradient_order_min", 1.5},
      {"integral_oracle_rel", 1e-6},
      {"cauchy_schwarz_rel", 1e-12},
      {"exact", 0.0},
  };
}

struct AliceSpec {
  std::string type = "kick";  // "kick" or "rotation"
  std::string function_id = "alice_kick";
  // rotation variant
  double r1 = 0.5, r2 = 0.75, theta = M_PI;
  Vec center = kZeroVec;
};

struct CharlieSpec {
  std::string function_id = "charlie";
  int tn_n = 1000;
};

struct ScenarioConfig {
  int schema_version = kConfigSchemaVersion;
  int dimension = 2;
  int grid_n = 128;
  double grid_half_length = 4.0;
  double mass = 1.0;
  int time_nodes = 32;
  ScenarioGeometry geometry;
  AliceSpec alice;
  CharlieSpec charlie;
  std::string base_state_id;  // empty -> zero base solution
  std::string witness_id = "witness";
  std::map<std::string, TestFunction> test_functions;
  // Polynomial functionals as lists of (coefficient, test-function-id list).
  std::map<std::string, std::vector<std::pair<double, std::vector<std::string>>>> functionals;
  std::map<std::string, double> tolerances = default_tolerances();
  std::uint64_t seed = 20240612;
  double max_evolution_time = 1.0;

  SpatialGrid grid() const { return SpatialGrid::make(dimension, grid_n, grid_half_length); }
  KGParams params() const { return KGParams(mass, grid(), time_nodes); }

  const TestFunction& function(const std::string& id) const {
    auto it = test_functions.find(id);
    if (it == test_functions.end()) throw ConfigError("unknown test function id: " + id);
    return it->second;
  }

  double tolerance(const std::string& key) const {
    auto it = tolerances.find(key);
    if (it == tolerances.end()) throw ConfigError("unknown tolerance key: " + key);
    return it->second;
  }

  ClassicalChannel alice_channel() const {
    if (alice.type == "kick") return KickChannel{function(alice.function_id)};
    if (alice.type == "rotation")
      return RotationChannel{LocalizedRotation{alice.r1, alice.r2, alice.theta, geometry.axis},
                             alice.center};
    throw ConfigError("alice.type must be 'kick' or 'rotation'");
  }
  RotationChannel bob_channel() const {
    return RotationChannel{
        LocalizedRotation{geometry.r1, geometry.r2, geometry.theta, geometry.axis}, kZeroVec};
  }
  PolynomialFunctional functional(const std::string& id) const {
    auto it = functionals.find(id);
    if (it == functionals.end()) throw ConfigError("unknown functional id: " + id);
    PolynomialFunctional p;
    for (const auto& [coeff, ids] : it->second) {
      PolynomialFunctional::Term term;
      term.coeff = coeff;
      for (const auto& fid : ids) term.factors.push_back(function(fid));
      p.terms.push_back(std::move(term));
    }
    p.canonicalize();
    return p;
  }
};

// ---- JSON (de)serialization -------------------------------------------------

inline json to_json(const TestFunction& f) {
  json j;
  j["center"] = f.dim == 3 ? std::vector<double>{f.center[0], f.center[1], f.center[2]}
                           : std::vector<double>{f.center[0], f.center[1]};
  j["radius"] = f.radius;
  j["t0"] = f.t0;
  j["t_halfwidth"] = f.t_halfwidth;
  j["amplitude"] = f.amplitude;
  j["plateau_fraction"] = f.plateau_fraction;
  return j;
}

inline TestFunction test_function_from_json(const json& j, int dim) {
  TestFunction f;
  f.dim = dim;
  const auto c = j.at("center").get<std::vector<double>>();
  if (static_cast<int>(c.size()) != dim)
    throw ConfigError("test function center has wrong dimension");
  for (std::size_t i = 0; i < c.size(); ++i) f.center[i] = c[i];
  f.radius = j.at("radius").get<double>();
  f.t0 = j.at("t0").get<double>();
  f.t_halfwidth = j.at("t_halfwidth").get<double>();
  f.amplitude = j.value("amplitude", 1.0);
  f.plateau_fraction = j.value("plateau_fraction", 0.3);
  return f;
}

inline json to_json(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["dimension"] = c.dimension;
  j["grid"] = {{"n", c.grid_n}, {"half_length", c.grid_half_length}};
  j["mass"] = c.mass;
  j["time_quadrature"] = {{"nodes", c.time_nodes}};
  j["geometry"] = {{"r1", c.geometry.r1},     {"r2", c.geometry.r2},
                   {"s", c.geometry.s},       {"lambda", c.geometry.lambda},
                   {"theta", c.geometry.theta}, {"axis", c.geometry.axis}};
  json alice = {{"type", c.alice.type}, {"function", c.alice.function_id}};
  if (c.alice.type == "rotation") {
    alice["r1"] = c.alice.r1;
    alice["r2"] = c.alice.r2;
    alice["theta"] = c.alice.theta;
    alice["center"] = c.dimension == 3
                          ? std::vector<double>{c.alice.center[0], c.alice.center[1],
                                                c.alice.center[2]}
                          : std::vector<double>{c.alice.center[0], c.alice.center[1]};
  }
  j["alice"] = alice;
  j["charlie"] = {{"function", c.charlie.function_id}, {"tn_n", c.charlie.tn_n}};
  if (!c.base_state_id.empty()) j["base_state"] = c.base_state_id;
  j["witness"] = c.witness_id;
  json fns = json::object();
  for (const auto& [id, f] : c.test_functions) fns[id] = to_json(f);
  j["test_functions"] = fns;
  if (!c.functionals.empty()) {
    json fl = json::object();
    for (const auto& [id, terms] : c.functionals) {
      json arr = json::array();
      for (const auto& [coeff, ids] : terms) arr.push_back(json::array({coeff, ids}));
      fl[id] = arr;
    }
    j["functionals"] = fl;
  }
  j["tolerances"] = c.tolerances;
  j["seed"] = c.seed;
  j["max_evolution_time"] = c.max_evolution_time;
  return j;
}

inline ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  c.schema_version = j.value("schema_version", kConfigSchemaVersion);
  if (c.schema_version != kConfigSchemaVersion)
    throw ConfigError("unsupported config schema version");
  c.dimension = j.at("dimension").get<int>();
  c.grid_n = j.at("grid").at("n").get<int>();
  c.grid_half_length = j.at("grid").at("half_length").get<double>();
  c.mass = j.at("mass").get<double>();
  c.time_nodes = j.contains("time_quadrature") ? j["time_quadrature"].value("nodes", 32) : 32;
  const auto& g = j.at("geometry");
  c.geometry.r1 = g.at("r1").get<double>();
  c.geometry.r2 = g.at("r2").get<double>();
  c.geometry.s = g.at("s").get<double>();
  c.geometry.lambda = g.at("lambda").get<double>();
  c.geometry.theta = g.value("theta", M_PI);
  c.geometry.axis = g.value("axis", 2);
  c.geometry.dim = c.dimension;
  const auto& a = j.at("alice");
  c.alice.type = a.value("type", "kick");
  c.alice.function_id = a.value("function", std::string("alice_kick"));
  if (c.alice.type == "rotation") {
    c.alice.r1 = a.at("r1").get<double>();
    c.alice.r2 = a.at("r2").get<double>();
    c.alice.theta = a.value("theta", M_PI);
    const auto cc = a.at("center").get<std::vector<double>>();
    for (std::size_t i = 0; i < cc.size() && i < 3; ++i) c.alice.center[i] = cc[i];
  }
  const auto& ch = j.at("charlie");
  c.charlie.function_id = ch.value("function", std::string("charlie"));
  c.charlie.tn_n = ch.value("tn_n", 1000);
  c.base_state_id = j.value("base_state", std::string());
  c.witness_id = j.value("witness", std::string("witness"));
  for (const auto& [id, fj] : j.at("test_functions").items())
    c.test_functions.emplace(id, test_function_from_json(fj, c.dimension));
  if (j.contains("functionals")) {
    for (const auto& [id, arr] : j["functionals"].items()) {
      std::vector<std::pair<double, std::vector<std::string>>> terms;
      for (const auto& t : arr)
        terms.emplace_back(t.at(0).get<double>(), t.at(1).get<std::vector<std::string>>());
      c.functionals.emplace(id, std::move(terms));
    }
  }
  c.tolerances = default_tolerances();
  if (j.contains("tolerances"))
    for (const auto& [k, v] : j["tolerances"].items()) c.tolerances[k] = v.get<double>();
  c.seed = j.value("seed", std::uint64_t{20240612});
  c.max_evolution_time = j.value("max_evolution_time", 1.0);
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json j;
  in >> j;
  return config_from_json(j);
}

// ---- validation -------------------------------------------------------------

// Checks every geometric and numerical invariant the run relies on; an empty
// list means the config is runnable. Violations are data, not exceptions.
inline std::vector<std::string> validate_config(const ScenarioConfig& c) {
  std::vector<std::string> out;
  if (c.dimension != 2 && c.dimension != 3) out.push_back("dimension must be 2 or 3");
  if (c.grid_n < 16 || (c.grid_n & (c.grid_n - 1)) != 0)
    out.push_back("grid.n must be a power of two >= 16");
  if (!(c.grid_half_length > 0.0)) out.push_back("grid.half_length must be positive");
  if (!(c.mass > 0.0)) out.push_back("mass must be strictly positive (m = 0 is excluded)");
  if (c.time_nodes < 8) out.push_back("time_quadrature.nodes must be >= 8");

  for (const auto& v : c.geometry.violations()) out.push_back(v);
  if (!out.empty()) return out;  // further checks need a sane grid/geometry

  const double h = 2.0 * c.grid_half_length / c.grid_n;
  const double margin = 2.0 * h;

  // Causal-margin rule: the causal cone of every dynamical support (the ones
  // that get evolved) must never wrap around the periodic boundary within a
  // run. The witness is static and only needs the sampling margin below.
  auto has = [&](const std::string& id) { return c.test_functions.count(id) > 0; };
  double max_support = c.geometry.r2;
  for (const std::string& id :
       {c.charlie.function_id, c.alice.function_id, c.base_state_id}) {
    if (!id.empty() && has(id)) {
      const TestFunction& f = c.function(id);
      max_support = std::max(max_support, f.spatial_extent() + f.time_extent());
    }
  }
  if (max_support + c.max_evolution_time + margin > c.grid_half_length)
    out.push_back("causal margin violated: support radius + evolution time + 2h exceeds L");
  if (!has(c.charlie.function_id)) {
    out.push_back("charlie function id not found: " + c.charlie.function_id);
    return out;
  }
  const TestFunction& charlie = c.function(c.charlie.function_id);
  if (!c.geometry.function_in_cone(charlie, c.geometry.ball_plus()))
    out.push_back("charlie support not contained in O(+)");
  if (c.alice.type == "kick") {
    if (!has(c.alice.function_id)) {
      out.push_back("alice function id not found: " + c.alice.function_id);
      return out;
    }
    const TestFunction& alice = c.function(c.alice.function_id);
    if (!c.geometry.function_in_cone(alice, c.geometry.ball_minus()))
      out.push_back("alice kick support not contained in O(-)");
  } else if (c.alice.type == "rotation") {
    if (!(c.alice.r1 < c.alice.r2)) out.push_back("alice rotation requires r1 < r2");
    if (norm(c.alice.center) + c.alice.r2 > c.geometry.r1)
      out.push_back("alice rotation region must sit inside O(r1) on Alice's side");
    for (int axis = 0; axis < c.dimension; ++axis) {
      const double cells = c.alice.center[axis] / h;
      if (std::abs(cells - std::llround(cells)) > 1e-9)
        out.push_back("alice rotation center must lie on the lattice");
    }
    if (c.base_state_id.empty())
      out.push_back("rotation alice needs a nonzero base state (zero field is rotation invariant)");
  } else {
    out.push_back("alice.type must be 'kick' or 'rotation'");
  }
  if (!c.base_state_id.empty() && !has(c.base_state_id))
    out.push_back("base state function id not found: " + c.base_state_id);
  if (!has(c.witness_id)) {
    out.push_back("witness function id not found: " + c.witness_id);
  } else if (!c.geometry.function_spacelike_from_cone(c.function(c.witness_id),
                                                      c.geometry.ball_r2())) {
    out.push_back("witness support must be spacelike from O(r2)");
  }
  if (c.charlie.tn_n < 1) out.push_back("charlie.tn_n must be >= 1");

  // Sampling margins for every declared function.
  for (const auto& [id, f] : c.test_functions) {
    for (int axis = 0; axis < c.dimension; ++axis)
      if (std::abs(f.center[axis]) + f.radius > c.grid_half_length - margin) {
        out.push_back("test function '" + id + "' violates the sampling margin");
        break;
      }
  }
  return out;
}

}  // namespace kgops
