#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace adaptnet::cli;
  CLI::App app{"Adaptive network experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  RunOverrides overrides;
  auto* run = app.add_subcommand("run", "simulate a configured experiment");
  run->add_option("--config", config, "experiment JSON")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--trials", overrides.trials, "number of Monte Carlo trials");
  run->add_option("--iters", overrides.iters, "iterations per trial");
  run->add_option("--seed", overrides.seed, "top-level seed");
  run->add_option("--strategy", overrides.strategy, "consensus | atc | cta")
      ->check(CLI::IsMember({"consensus", "atc", "cta"}));

  auto* theory = app.add_subcommand("theory", "print the steady-state analysis");
  theory->add_option("--config", config, "experiment JSON")->required();

  std::string preset_name;
  std::string preset_out;
  auto* preset_cmd = app.add_subcommand("preset", "write a ready-made config");
  preset_cmd->add_option("name", preset_name, "fig4 | partial_obs | topology_invariance")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  preset_cmd->add_option("--out", preset_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config, out_dir, overrides, std::cout, std::cerr);
  if (*theory) return cmd_theory(config, std::cout, std::cerr);
  return cmd_preset(preset_name, preset_out, std::cerr);
}
