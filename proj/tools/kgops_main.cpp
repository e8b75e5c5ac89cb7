// kgops command-line driver: scenario runs, config validation, convergence
// studies and Cauchy-data dumps. Exit code 0 iff all asserted tolerances
// pass; 2 for unusable configs or I/O problems.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "kgops/io.hpp"
#include "kgops/scenario.hpp"

namespace {

void write_report(const kgops::ScenarioReport& rep, const std::string& path) {
  const std::string text = rep.to_json().dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw kgops::IoError("cannot open report file: " + path);
  out << text;
}

void print_block_summary(const kgops::ClassicalBlock& b) {
  std::printf("classical (%s): baseline=% .6e alice_only=% .6e bob_only=% .6e\n",
              b.variant.c_str(), b.baseline, b.alice_only, b.bob_only);
  std::printf("  alice_and_bob=% .6e signal=% .6e scale=%.6e\n", b.alice_and_bob, b.signal,
              b.signal_scale);
  std::printf("  no_signaling=%.3e witness=%.3e -> %s\n", b.no_signaling_defect,
              b.spacelike_invariance_defect, b.pass ? "PASS" : "FAIL");
}

void print_block_summary(const kgops::QuantumBlock& b) {
  std::printf("quantum: baseline=% .6e alice_only=% .6e alice_and_bob=% .6e\n", b.baseline,
              b.alice_only, b.alice_and_bob);
  std::printf("  tn_defect(n=%d)=% .6e large-n gap=%.3e vacuum-rotation=%.3e\n", b.tn_n,
              b.tn_defect, b.tn_large_n_gap, b.vacuum_rotation_defect);
  std::printf("  no_signaling=%.3e signal=%.6e scale=%.6e -> %s\n", b.no_signaling_defect,
              b.signal, b.signal_scale, b.pass ? "PASS" : "FAIL");
}

void print_rows(const std::vector<kgops::PropertyRow>& rows) {
  for (const auto& r : rows)
    std::printf("  [%s] %-45s measured=%.3e %s %.3e (%s)\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.measured, r.larger_is_better ? ">=" : "<=", r.tolerance,
                r.tolerance_key.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"localized operations for the lattice Klein-Gordon field"};
  app.require_subcommand(1);

  std::string config_path, out_path, function_id, format = "csv";
  int levels = 3;
  bool config_only = false;

  auto* validate = app.add_subcommand("validate", "validate a config and run the property suite");
  validate->add_option("config", config_path, "config file")->required();
  validate->add_option("-o,--output", out_path, "report file ('-' for stdout)");
  validate->add_flag("--config-only", config_only, "skip the property suite");

  auto* classical = app.add_subcommand("run-classical", "run the classical scenario");
  classical->add_option("config", config_path, "config file")->required();
  classical->add_option("-o,--output", out_path, "report file ('-' for stdout)");

  auto* quantum = app.add_subcommand("run-quantum", "run the quantum scenario");
  quantum->add_option("config", config_path, "config file")->required();
  quantum->add_option("-o,--output", out_path, "report file ('-' for stdout)");

  auto* convergence = app.add_subcommand("convergence", "grid-refinement study");
  convergence->add_option("config", config_path, "config file")->required();
  convergence->add_option("--levels", levels, "number of grid levels (>= 2)");
  convergence->add_option("-o,--output", out_path, "report file ('-' for stdout)");

  auto* dump = app.add_subcommand("dump-green", "dump Cauchy data of G f for a test function");
  dump->add_option("config", config_path, "config file")->required();
  dump->add_option("--function", function_id, "test function id")->required();
  dump->add_option("-o,--output", out_path, "output file")->required();
  dump->add_option("--format", format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const kgops::ScenarioConfig cfg = kgops::load_config(config_path);
    const auto violations = kgops::validate_config(cfg);
    kgops::ReportTimer timer;

    if (app.got_subcommand(validate)) {
      if (!violations.empty()) {
        std::printf("config has %zu violation(s):\n", violations.size());
        for (const auto& v : violations) std::printf("  - %s\n", v.c_str());
        return 2;
      }
      std::printf("config ok\n");
      if (config_only) return 0;
      kgops::ScenarioReport rep = kgops::make_report(cfg);
      rep.properties = kgops::run_validation_suite(cfg);
      kgops::finalize_report(rep, timer);
      print_rows(rep.properties);
      if (!out_path.empty()) write_report(rep, out_path);
      std::printf("%s\n", rep.all_pass ? "all properties pass" : "property failures");
      return rep.all_pass ? 0 : 1;
    }

    if (!violations.empty()) {
      std::fprintf(stderr, "config has violations; run 'validate' for details\n");
      return 2;
    }

    if (app.got_subcommand(classical)) {
      kgops::ScenarioReport rep = kgops::make_report(cfg);
      rep.classical = kgops::run_classical(cfg);
      kgops::finalize_report(rep, timer);
      print_block_summary(*rep.classical);
      if (!out_path.empty()) write_report(rep, out_path);
      return rep.all_pass ? 0 : 1;
    }
    if (app.got_subcommand(quantum)) {
      kgops::ScenarioReport rep = kgops::make_report(cfg);
      rep.quantum = kgops::run_quantum(cfg);
      kgops::finalize_report(rep, timer);
      print_block_summary(*rep.quantum);
      if (!out_path.empty()) write_report(rep, out_path);
      return rep.all_pass ? 0 : 1;
    }
    if (app.got_subcommand(convergence)) {
      kgops::ScenarioReport rep = kgops::make_report(cfg);
      rep.convergence = kgops::run_convergence(cfg, levels);
      kgops::finalize_report(rep, timer);
      for (const auto& r : rep.convergence) {
        std::printf("  [%s] %-30s order %.2f (nominal %.1f)%s:", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.observed_order, r.nominal_order,
                    r.order_asserted ? "" : " [floor]");
        for (const auto& [n, d] : r.defects) std::printf("  N=%d:%.3e", n, d);
        std::printf("\n");
      }
      if (!out_path.empty()) write_report(rep, out_path);
      return rep.all_pass ? 0 : 1;
    }
    if (app.got_subcommand(dump)) {
      const kgops::KGParams params = cfg.params();
      const kgops::CauchyData data =
          kgops::green_cauchy_data(cfg.function(function_id), params);
      if (format == "csv")
        kgops::dump_cauchy_csv(data, cfg.mass, out_path);
      else
        kgops::dump_cauchy_binary(data, cfg.mass, out_path);
      std::printf("wrote %s\n", out_path.c_str());
      return 0;
    }
  } catch (const kgops::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
