#include <CLI11.hpp>

#include <iostream>

#include "cournot/cli/commands.hpp"

namespace {

void add_source(CLI::App* cmd, cournot::cli::ConfigSource& source) {
  auto* config = cmd->add_option("-c,--config", source.config_path, "YAML experiment config");
  auto* preset = cmd->add_option("-p,--preset", source.preset, "named preset (see `presets`)");
  config->excludes(preset);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cournot::cli;

  CLI::App app{"Repeated Cournot competition between bandit learners"};
  app.require_subcommand(1);
  app.set_version_flag("--version", COURNOT_VERSION);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  add_source(run_cmd, run.source);
  run_cmd->add_option("--seed", run.seed, "master seed (overrides the config)");
  run_cmd->add_option("-o,--out-dir", run.out_dir, "output directory")->capture_default_str();
  run_cmd->add_flag("--full-log", run.full_log, "also write per-step steps.csv");
  run_cmd->add_flag("--diagnostics", run.diagnostics, "also write diagnostics.csv (agent 0)");

  SweepCmdOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "run one experiment over many seeds");
  add_source(sweep_cmd, sweep.source);
  sweep_cmd->add_option("--seeds", sweep.seeds, "1..k, a,b,c or a single seed")->capture_default_str();
  sweep_cmd->add_option("-j,--jobs", sweep.jobs,
                        "worker threads (default: cores, capped by COURNOT_MAX_JOBS)");
  sweep_cmd->add_option("-o,--out-dir", sweep.out_dir, "output directory")->capture_default_str();

  app.add_subcommand("presets", "list the built-in presets");

  DemandCmdOptions demand;
  auto* demand_cmd = app.add_subcommand("demand", "export the demand schedule as t,u CSV");
  add_source(demand_cmd, demand.source);
  demand_cmd->add_option("--seed", demand.seed, "master seed (overrides the config)");
  demand_cmd->add_option("-o,--out", demand.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*sweep_cmd) return cmd_sweep(sweep, std::cout, std::cerr);
  if (*demand_cmd) return cmd_demand(demand, std::cout, std::cerr);
  return cmd_presets(std::cout);
}
