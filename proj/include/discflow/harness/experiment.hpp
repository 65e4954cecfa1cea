#pragma once

#include <memory>
#include <optional>

#include "discflow/flows/checkpoint.hpp"
#include "discflow/harness/config.hpp"
#include "discflow/samplers/discrete.hpp"
#include "discflow/samplers/latent_mh.hpp"
#include "discflow/train/fit.hpp"

namespace discflow::harness {

// A fully resolved experiment: target instance, typed option bundles, and
// the flow factory, all derived from one config + seed + desk-scale factor.
struct Experiment {
  Config cfg;
  std::uint64_t seed = 0;
  double desk_scale = 1.0;
  int threads = 0;

  std::unique_ptr<targets::DiscreteTarget> target;

  // Ising extras kept for rendering.
  std::vector<int> ising_truth;      // {0,1}
  std::vector<int> ising_corrupted;  // {0,1}
  int ising_height = 0;
  int ising_width = 0;

  static Experiment build(Config cfg, std::uint64_t seed, double desk_scale);

  long scaled(long steps) const;

  flows::FlowModel make_flows() const;
  train::TrainConfig train_config() const;
  samplers::LatentRunOptions mh_options() const;
  samplers::DiscreteRunOptions baseline_options(samplers::BaselineKind kind) const;

  std::string target_kind() const { return cfg.gets("target", "kind", ""); }
  std::string sampler_kind() const { return cfg.gets("sampler", "kind", "mh"); }
  int group_size() const { return static_cast<int>(cfg.geti("sampler", "group_size", 16)); }
  std::string ess_space() const { return cfg.gets("sampler", "ess_space", "theta"); }
};

// Builds just the target (with Ising side-channel images when applicable).
std::unique_ptr<targets::DiscreteTarget> make_target(const Config& cfg,
                                                     std::vector<int>* ising_truth = nullptr,
                                                     std::vector<int>* ising_corrupted = nullptr);

}  // namespace discflow::harness
