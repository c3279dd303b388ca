#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Active feedback linearization of a flexible-joint manipulator via extended state observers"};
  app.require_subcommand(1);

  aiofl::cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop scenario");
  auto* preset_opt = simulate->add_option("--preset", sim.preset, "Registered preset name");
  auto* config_opt = simulate->add_option("--config", sim.config, "Preset config file");
  preset_opt->excludes(config_opt);
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Measurement-noise seed");
  simulate->add_option("--dt", sim.dt, "Integration step (s)");
  simulate->add_option("--tf", sim.tf, "Horizon (s)");
  bool no_plots = false;
  simulate->add_flag("--no-plots", no_plots, "Skip the SVG plots");

  aiofl::cli::TuneOptions tune;
  auto* tune_cmd = app.add_subcommand("tune", "GA search minimising the performance index");
  tune_cmd->add_option("--space", tune.space, "Search-space file")->required();
  tune_cmd->add_option("--out", tune.out, "Output directory")->capture_default_str();
  tune_cmd->add_option("--budget", tune.budget, "Objective evaluation budget");
  tune_cmd->add_option("--seed", tune.seed, "GA seed");
  tune_cmd->add_option("--threads", tune.threads, "Parallel fitness evaluations");

  std::optional<std::string> show;
  auto* presets = app.add_subcommand("presets", "List presets or print one as a config file");
  presets->add_option("--show", show, "Preset to print");

  aiofl::cli::AnalyzeOptions analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Relative degree and observer Lyapunov certificate");
  auto* a_preset = analyze_cmd->add_option("--preset", analyze.preset, "Registered preset name");
  auto* a_config = analyze_cmd->add_option("--config", analyze.config, "Preset config file");
  a_preset->excludes(a_config);

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    sim.plots = !no_plots;
    return aiofl::cli::simulate_command(sim);
  }
  if (tune_cmd->parsed()) return aiofl::cli::tune_command(tune);
  if (presets->parsed()) return aiofl::cli::presets_command(show);
  return aiofl::cli::analyze_command(analyze);
}
