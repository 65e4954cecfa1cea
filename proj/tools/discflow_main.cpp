#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "discflow/harness/commands.hpp"
#include "discflow/harness/presets.hpp"

namespace {

using discflow::harness::CommandArgs;

void add_common(CLI::App* cmd, CommandArgs& args) {
  cmd->add_option("--preset", args.preset, "built-in experiment preset");
  cmd->add_option("--config", args.config_path, "config file (overrides preset values)");
  cmd->add_option("--seed", args.seed, "master RNG seed");
  cmd->add_option("--desk-scale", args.desk_scale,
                  "multiplier on iterations / steps / burn-in for fast runs");
  cmd->add_option("--out", args.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discflow: flow-transport MCMC for discrete distributions"};
  app.require_subcommand(1);

  CommandArgs args;
  std::string checkpoint, kind = "gibbs", samples, results_dir;

  auto* train = app.add_subcommand("train", "learn the transport map for a target");
  add_common(train, args);

  auto* sample = app.add_subcommand("sample", "run latent-space chains and push samples");
  add_common(sample, args);
  sample->add_option("--checkpoint", checkpoint, "trained flow checkpoint")->required();

  auto* baseline = app.add_subcommand("baseline", "run a discrete-space baseline sampler");
  add_common(baseline, args);
  baseline->add_option("--kind", kind, "gibbs | discrete-mh")->required();

  auto* compare = app.add_subcommand("compare", "consolidate results tables");
  compare->add_option("--results", results_dir, "directory with results.csv files")->required();

  auto* render = app.add_subcommand("render-ising", "write PGM images for an ising run");
  add_common(render, args);
  render->add_option("--samples", samples, "samples.bin from a sampling run")->required();

  auto* eval = app.add_subcommand("eval-gmm", "TV distance against the enumerated target");
  add_common(eval, args);
  eval->add_option("--samples", samples, "samples.bin from a sampling run")->required();

  auto* presets = app.add_subcommand("presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      discflow::harness::cmd_train(args);
    } else if (sample->parsed()) {
      discflow::harness::cmd_sample(args, checkpoint);
    } else if (baseline->parsed()) {
      discflow::harness::cmd_baseline(args, kind);
    } else if (compare->parsed()) {
      discflow::harness::cmd_compare(results_dir);
    } else if (render->parsed()) {
      discflow::harness::cmd_render_ising(args, samples);
    } else if (eval->parsed()) {
      const double tv = discflow::harness::cmd_eval_gmm(args, samples);
      std::printf("tv_distance %.6f\n", tv);
    } else if (presets->parsed()) {
      for (const auto& name : discflow::harness::preset_names()) std::printf("%s\n", name.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return discflow::harness::map_exit_code(e);
  }
  return 0;
}
