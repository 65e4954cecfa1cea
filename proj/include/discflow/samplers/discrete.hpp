#pragma once

#include <cstdint>

#include "discflow/numcore/rng.hpp"
#include "discflow/targets/target.hpp"

namespace discflow::samplers {

using numcore::Rng;
using targets::DiscreteTarget;

struct DiscreteChain {
  std::vector<int> theta;
  Rng rng;
  long proposed = 0;
  long accepted = 0;

  DiscreteChain(std::vector<int> t0, std::uint64_t seed) : theta(std::move(t0)), rng(seed) {}
};

// One Gibbs sweep: visits all coordinates in random order and resamples each
// from its exact conditional by enumerating the K levels.
void gibbs_sweep(const DiscreteTarget& target, DiscreteChain& chain);

// One random-walk MH move: a uniformly chosen coordinate is proposed a
// uniformly chosen level (symmetric proposal), accepted by the pi ratio.
// Returns true on acceptance.
bool discrete_mh_step(const DiscreteTarget& target, DiscreteChain& chain);

enum class BaselineKind { kGibbs, kDiscreteMh };

struct DiscreteRunOptions {
  BaselineKind kind = BaselineKind::kDiscreteMh;
  int n_chains = 128;
  long n_steps = 100000;  // Gibbs counts sweeps, MH counts single-site moves
  int thin = 10;
  long burn_in = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
  bool init_random = true;  // uniform random start, otherwise all-zero
};

struct DiscreteRunResult {
  std::vector<int> theta;  // [chain][kept][dim]
  int n_chains = 0;
  long n_kept = 0;
  int dim = 0;
  double wall_seconds = 0.0;  // includes burn-in
  long proposed = 0;
  long accepted = 0;

  const int* sample(int chain, long t) const {
    return theta.data() + (static_cast<std::size_t>(chain) * n_kept + t) * dim;
  }
};

DiscreteRunResult run_discrete_baseline(const DiscreteTarget& target,
                                        const DiscreteRunOptions& opts);

}  // namespace discflow::samplers
