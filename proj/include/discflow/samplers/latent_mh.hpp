#pragma once

#include <cstdint>

#include "discflow/numcore/rng.hpp"
#include "discflow/train/latent_density.hpp"

namespace discflow::samplers {

using numcore::Rng;
using numcore::Vec;

// Sampler-facing view of a latent log-density.
class LatentLogDensity {
 public:
  virtual ~LatentLogDensity() = default;
  virtual train::LatentEval eval(const Vec& z) const = 0;
  virtual int dim() const = 0;
};

class DensityView final : public LatentLogDensity {
 public:
  explicit DensityView(const train::LatentDensity& density) : density_(&density) {}
  train::LatentEval eval(const Vec& z) const override {
    return train::latent_logdensity(*density_, z);
  }
  int dim() const override { return density_->dim(); }

 private:
  const train::LatentDensity* density_;
};

// One latent chain: state, cached log-density, per-chain RNG, counters.
struct LatentChain {
  Vec z;
  double logp = 0.0;
  bool ood = false;
  Rng rng;
  long proposed = 0;
  long accepted = 0;
  long nonfinite_rejects = 0;

  LatentChain(Vec z0, std::uint64_t seed) : z(std::move(z0)), rng(seed) {}
};

// Random-walk proposal z' = z + sigma * xi, xi ~ N(0, I), accepted with
// probability min(1, exp(logp(z') - logp(z))). Non-finite proposals are
// rejected and counted. Returns true on acceptance.
bool mh_latent_step(LatentChain& chain, const LatentLogDensity& target, double sigma_prop);

struct LatentRunOptions {
  int n_chains = 128;
  long n_steps = 100000;
  int thin = 10;
  double sigma_prop = 0.25;
  std::uint64_t seed = 0;
  int threads = 1;
  // Optional pre-run step-size adaptation (Robbins-Monro toward a target
  // acceptance rate, then frozen; adaptation samples are discarded). Off by
  // default: the protocol runs chains with no burn-in.
  bool adapt = false;
  long adapt_steps = 500;
  double adapt_target = 0.30;
};

struct LatentRunResult {
  std::vector<double> z;  // [chain][kept][dim]
  int n_chains = 0;
  long n_kept = 0;
  int dim = 0;
  double wall_seconds = 0.0;
  long proposed = 0;
  long accepted = 0;
  long nonfinite_rejects = 0;
  double sigma_used = 0.0;

  double acceptance_rate() const {
    return proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
  const double* sample(int chain, long t) const {
    return z.data() + (static_cast<std::size_t>(chain) * n_kept + t) * dim;
  }
};

// Runs n_chains independent chains from z0 ~ N(0, I), keeping every thin-th
// state. Chains are embarrassingly parallel; per-chain RNG streams
// (seed ^ chain_id) make the result independent of scheduling.
LatentRunResult run_latent_mh(const LatentLogDensity& target, const LatentRunOptions& opts);
LatentRunResult run_latent_mh(const train::LatentDensity& density, const LatentRunOptions& opts);

// The per-chain seeds used by the runner, exposed so chain trajectories can
// be reproduced in isolation.
std::uint64_t chain_init_seed(std::uint64_t master, int chain_id);
std::uint64_t chain_walk_seed(std::uint64_t master, int chain_id);

}  // namespace discflow::samplers
