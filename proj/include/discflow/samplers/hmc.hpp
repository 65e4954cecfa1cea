#pragma once

#include "discflow/numcore/rng.hpp"
#include "discflow/samplers/latent_mh.hpp"
#include "discflow/train/latent_density.hpp"

namespace discflow::samplers {

using numcore::Rng;
using numcore::Vec;

// Differentiable log-density interface for the HMC integrator.
class GradTarget {
 public:
  virtual ~GradTarget() = default;
  virtual double logp(const Vec& z) const = 0;
  // Returns log p(z) and fills grad with its gradient.
  virtual double logp_grad(const Vec& z, Vec& grad) const = 0;
};

class LatentGradTarget final : public GradTarget {
 public:
  explicit LatentGradTarget(const train::LatentDensity& density) : density_(&density) {}
  double logp(const Vec& z) const override;
  double logp_grad(const Vec& z, Vec& grad) const override;

 private:
  const train::LatentDensity* density_;
};

// One HMC transition: leapfrog with standard Gaussian momentum and a
// Metropolis correction on the Hamiltonian. The latent log-density's
// gradient exists only almost everywhere (it jumps across cell boundaries),
// so this sampler is shipped as optional; the protocol sampler is MH.
// Returns true on acceptance. energy_error, when non-null, receives
// |H(end) - H(start)| for the proposed trajectory.
bool hmc_latent_step(const GradTarget& target, Vec& z, double& logp_cur, Rng& rng,
                     double step_size, int n_leapfrog, double* energy_error = nullptr);

struct HmcRunOptions {
  int n_chains = 16;
  long n_steps = 1000;
  int thin = 1;
  double step_size = 0.05;
  int n_leapfrog = 8;
  std::uint64_t seed = 0;
  int threads = 1;
};

LatentRunResult run_latent_hmc(const train::LatentDensity& density, const HmcRunOptions& opts);

}  // namespace discflow::samplers
