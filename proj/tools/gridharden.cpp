#include <iostream>

#include "CLI11.hpp"

#include "gridharden/commands.hpp"

namespace {

void input_flags(CLI::App* cmd, gridharden::RunConfig& cfg, bool menu) {
  cmd->add_option("--feeder", cfg.feeder, "Feeder JSON")->required();
  cmd->add_option("--scenario", cfg.scenario, "Damage scenario JSON")->required();
  if (menu) cmd->add_option("--menu", cfg.menu, "Hardening menu JSON")->required();
  cmd->add_flag("--strict", cfg.strict, "Reject unknown JSON fields");
  cmd->add_option("--out", cfg.out, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  gridharden::RunConfig cfg;
  std::string grid;

  CLI::App app{"Restoration-aware hardening planner for radial distribution feeders"};
  app.require_subcommand(1);

  auto* sequence = app.add_subcommand("sequence", "Optimal single-crew repair sequence");
  input_flags(sequence, cfg, false);
  sequence->add_flag("--oracle", cfg.oracle, "Also run the exhaustive permutation search");

  auto* harden = app.add_subcommand("harden", "Plan hardening under a budget");
  input_flags(harden, cfg, true);
  harden->add_option("--budget", cfg.budget, "Hardening budget")->required();
  harden->add_option("--option", cfg.option, "Schedule update policy 1|2|3")->check(CLI::Range(1, 3));
  harden->add_flag("--exact", cfg.exact, "Also run the exhaustive joint oracle");

  auto* sweep = app.add_subcommand("sweep", "Harm over a grid of budgets (CSV)");
  input_flags(sweep, cfg, true);
  sweep->add_option("--budgets", grid, "start:stop:step")->required();
  sweep->add_option("--option", cfg.option, "Schedule update policy 1|2|3")->check(CLI::Range(1, 3));
  sweep->add_option("--samples", cfg.samples, "Monte Carlo samples per budget (with --seed)");
  sweep->add_option("--seed", cfg.seed, "Enables Monte Carlo columns");
  sweep->add_option("--pmax", cfg.pmax, "Truncate sampled repair times at this value");

  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo expected harm");
  input_flags(evaluate, cfg, false);
  evaluate->add_option("--menu", cfg.menu, "Hardening menu JSON (evaluates the planned hardening)");
  evaluate->add_option("--budget", cfg.budget, "Hardening budget (with --menu)");
  evaluate->add_option("--option", cfg.option, "Schedule update policy 1|2|3")->check(CLI::Range(1, 3));
  evaluate->add_option("--samples", cfg.samples, "Sample count (default 10000)");
  evaluate->add_option("--seed", cfg.seed, "Master seed")->required();
  evaluate->add_option("--pmax", cfg.pmax, "Repair time upper bound; enables the worst-case gap bound");
  evaluate->add_option("--trajectory", cfg.trajectory, "Write the operability trajectory CSV here");
  evaluate->add_option("--horizon", cfg.horizon, "Trajectory horizon (default: total repair time)");

  auto* generate = app.add_subcommand("generate", "Random radial instance");
  generate->add_option("--nodes", cfg.nodes, "Node count")->required();
  generate->add_option("--damaged", cfg.damaged, "Damaged edge count")->required();
  generate->add_option("--options", cfg.options_per_edge, "Hardening options per damaged edge");
  generate->add_option("--seed", cfg.seed, "Seed")->required();
  generate->add_option("--out", cfg.out, "Output directory (default: one JSON document on stdout)");

  auto* validate = app.add_subcommand("validate", "Check input files");
  validate->add_option("--feeder", cfg.feeder, "Feeder JSON")->required();
  validate->add_option("--scenario", cfg.scenario, "Damage scenario JSON");
  validate->add_option("--menu", cfg.menu, "Hardening menu JSON");
  validate->add_flag("--strict", cfg.strict, "Reject unknown JSON fields");
  validate->add_option("--out", cfg.out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  if (!grid.empty()) {
    try {
      cfg.budgets = gridharden::BudgetGrid::parse(grid);
    } catch (const std::exception& e) {
      std::cerr << R"({"error":"invalid-grid","message":")" << e.what() << "\"}\n";
      return 2;
    }
  }
  return gridharden::run_command(cfg, std::cout, std::cerr);
}
