// command-line front end: run scenario files or built-in presets, print the check
// table, and hand back 0 on pass, 1 on a failed check, 2 on usage or scenario errors

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "gafield/runner.hpp"

namespace {

int execute(const gafield::Scenario& scn, const gafield::RunOptions& opts) {
  const gafield::Report rep = gafield::run_scenario(scn, opts);
  std::printf("scenario %s (%s)\n", rep.name.c_str(), rep.kind.c_str());
  for (const auto& c : rep.checks)
    std::printf("  %-34s residual %-12.3e tol %-9.1e %s\n", c.name.c_str(), c.residual,
                c.tolerance, c.pass ? "pass" : "FAIL");
  for (const auto& t : rep.tables) std::printf("  table %s\n", t.c_str());
  std::printf("checks: %zu, steps: %ld, wall: %.1f ms -> %s\n", rep.checks.size(),
              rep.step_count, rep.wall_ms, rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical gauge-field scenario runner"};
  app.require_subcommand(1);
  app.fallthrough(true);  // accept the global flags after the subcommand too

  std::string out_dir = ".";
  double tol_scale = 1.0;
  std::string jacobian = "analytic";
  std::uint64_t seed = 0;

  app.add_option("--out", out_dir, "directory for report.json and CSV tables");
  app.add_option("--tolerance-scale", tol_scale, "multiply every check tolerance");
  app.add_option("--jacobian", jacobian, "derivative route for field derivatives")
      ->check(CLI::IsMember({"fd", "analytic"}));
  auto* seed_opt = app.add_option("--seed", seed, "override the scenario seed");

  std::string file, preset_name;
  auto* run_cmd = app.add_subcommand("run", "run a scenario JSON file");
  run_cmd->add_option("file", file, "scenario file")->required();
  auto* preset_cmd = app.add_subcommand("preset", "run a built-in preset");
  preset_cmd->add_option("name", preset_name, "preset name; see list-presets")->required();
  auto* list_cmd = app.add_subcommand("list-presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  gafield::RunOptions opts;
  opts.out_dir = out_dir;
  opts.tolerance_scale = tol_scale;
  opts.force_fd = (jacobian == "fd");
  if (seed_opt->count() > 0) {
    opts.has_seed = true;
    opts.seed = seed;
  }

  try {
    if (list_cmd->parsed()) {
      std::printf("%-26s %-16s %s\n", "name", "kind", "topic");
      for (const auto& p : gafield::preset_registry()) {
        std::printf("%-26s %-16s %s\n", p.name, p.kind, p.topic);
        std::printf("%-26s %-16s   invariant: %s\n", "", "", p.invariant);
      }
      return 0;
    }
    if (run_cmd->parsed()) return execute(gafield::scenario_from_file(file), opts);
    return execute(gafield::preset_scenario(preset_name), opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
