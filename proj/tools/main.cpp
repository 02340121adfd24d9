#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lidopt/commands.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string preset;
  int frames = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* preset_opt = nullptr;
  CLI::Option* frames_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Run config file (JSON)")
      ->required();
  flags.seed_opt = cmd->add_option("--seed", flags.seed, "Override the seed");
  flags.out_opt =
      cmd->add_option("--out", flags.out, "Override the output directory");
  flags.preset_opt =
      cmd->add_option("--preset", flags.preset, "Override the preset path");
  flags.frames_opt = cmd->add_option("--frames", flags.frames,
                                     "Evaluate every k-th frame only");
}

lidopt::CliOverrides to_overrides(const CommonFlags& flags) {
  lidopt::CliOverrides overrides;
  if (flags.seed_opt->count()) overrides.seed = flags.seed;
  if (flags.out_opt->count()) overrides.out_dir = flags.out;
  if (flags.preset_opt->count()) overrides.preset = flags.preset;
  if (flags.frames_opt->count()) overrides.frame_stride = flags.frames;
  return overrides;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roadside LiDAR deployment toolkit"};
  app.require_subcommand(1);

  CommonFlags sim_flags, eval_flags, opt_flags;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Cast rays and export labeled clouds");
  add_common(simulate, sim_flags);
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a deployment with grid-occupancy entropy");
  add_common(evaluate, eval_flags);
  CLI::App* optimize =
      app.add_subcommand("optimize", "Search mount height and tilt with the swarm");
  add_common(optimize, opt_flags);

  std::string report_dir;
  CLI::App* report =
      app.add_subcommand("report", "Summarize the exports of a finished run");
  report->add_option("--out", report_dir, "Run directory to summarize")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lidopt::kExitConfig;
  }

  if (app.got_subcommand(simulate))
    return lidopt::cmd_simulate(sim_flags.config, to_overrides(sim_flags));
  if (app.got_subcommand(evaluate))
    return lidopt::cmd_evaluate(eval_flags.config, to_overrides(eval_flags));
  if (app.got_subcommand(optimize))
    return lidopt::cmd_optimize(opt_flags.config, to_overrides(opt_flags));
  if (app.got_subcommand(report)) return lidopt::cmd_report(report_dir);
  return lidopt::kExitConfig;
}
