#pragma once

#include <cstdint>

#include "discflow/train/objective.hpp"

namespace discflow::train {

struct TrainConfig {
  long iterations = 10000;
  int batch_size = 128;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  long checkpoint_every = 1000;
  bool straight_through = false;
  int blocks = 16;
  int threads = 1;

  void validate() const;
};

struct TrainTrace {
  std::vector<double> objective;
  std::vector<double> ood_rate;
  std::vector<double> grad_norm;
  bool diverged = false;
  long iterations_run = 0;
};

// Adam ascent on the batch-mean objective; deterministic given the seed.
// On divergence (non-finite objective) the flows are rolled back to the last
// checkpointed parameters and the trace is truncated with diverged = true.
TrainTrace fit(FlowStack& tphi, DequantFlow& tlambda, const DiscreteTarget& target,
               const TrainConfig& cfg);

}  // namespace discflow::train
