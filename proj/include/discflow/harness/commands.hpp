#pragma once

#include <cstdint>
#include <string>

#include "discflow/harness/config.hpp"

namespace discflow::harness {

struct CommandArgs {
  std::string preset;       // built-in preset name, optional
  std::string config_path;  // config file merged over the preset, optional
  std::uint64_t seed = 0;
  double desk_scale = 1.0;
  std::string out_dir;
};

// Preset and/or config file resolved into one Config; at least one of the two
// must be given.
Config resolve_config(const CommandArgs& args);

// Commands throw typed errors; map_exit_code translates them for the CLI.
// train: checkpoint.bin, trace.csv, train_meta.json
void cmd_train(const CommandArgs& args);
// sample: samples.csv/.bin, ess_report.json, results.csv row, sample_meta.json
void cmd_sample(const CommandArgs& args, const std::string& checkpoint_path);
// baseline: as sample, for kind "gibbs" or "discrete-mh", with burn-in
void cmd_baseline(const CommandArgs& args, const std::string& kind);
// compare: consolidated table over every results.csv under results_dir
void cmd_compare(const std::string& results_dir);
// render-ising: P5 PGM grid (truth, corrupted, per-chain posterior samples)
void cmd_render_ising(const CommandArgs& args, const std::string& samples_path);
// eval-gmm: TV distance between the sample histogram and the enumerated target
double cmd_eval_gmm(const CommandArgs& args, const std::string& samples_path);

// 0 ok, 2 config, 3 numeric, 4 io/format.
int map_exit_code(const std::exception& e);

}  // namespace discflow::harness
