#include "discflow/samplers/hmc.hpp"

#include <chrono>
#include <cmath>

#include "discflow/numcore/parallel.hpp"

namespace discflow::samplers {

double LatentGradTarget::logp(const Vec& z) const {
  return train::latent_logdensity(*density_, z).logp;
}

double LatentGradTarget::logp_grad(const Vec& z, Vec& grad) const {
  return train::latent_logdensity_grad(*density_, z, grad).logp;
}

bool hmc_latent_step(const GradTarget& target, Vec& z, double& logp_cur, Rng& rng,
                     double step_size, int n_leapfrog, double* energy_error) {
  const std::size_t d = z.size();
  Vec p(d);
  for (auto& v : p) v = rng.normal();

  double kin0 = 0.5 * numcore::dot(p, p);
  const double h0 = -logp_cur + kin0;

  Vec q = z;
  Vec grad(d);
  double logp = target.logp_grad(q, grad);
  if (!std::isfinite(logp)) return false;

  for (int s = 0; s < n_leapfrog; ++s) {
    for (std::size_t i = 0; i < d; ++i) p[i] += 0.5 * step_size * grad[i];
    for (std::size_t i = 0; i < d; ++i) q[i] += step_size * p[i];
    logp = target.logp_grad(q, grad);
    if (!std::isfinite(logp)) return false;
    for (std::size_t i = 0; i < d; ++i) p[i] += 0.5 * step_size * grad[i];
  }

  const double h1 = -logp + 0.5 * numcore::dot(p, p);
  if (energy_error) *energy_error = std::fabs(h1 - h0);
  if (!std::isfinite(h1)) return false;

  const double log_alpha = h0 - h1;
  bool accept = log_alpha >= 0.0;
  if (!accept) accept = std::log(rng.uniform() + 1e-300) < log_alpha;
  if (accept) {
    z = std::move(q);
    logp_cur = logp;
  }
  return accept;
}

LatentRunResult run_latent_hmc(const train::LatentDensity& density, const HmcRunOptions& opts) {
  if (opts.n_chains <= 0 || opts.n_steps < 0 || opts.thin <= 0 || opts.n_leapfrog < 0) {
    throw ConfigError("run_latent_hmc: bad chain configuration");
  }
  const int d = density.dim();
  const long n_kept = opts.n_steps / opts.thin;
  LatentGradTarget target(density);

  LatentRunResult out;
  out.n_chains = opts.n_chains;
  out.n_kept = n_kept;
  out.dim = d;
  out.sigma_used = opts.step_size;
  out.z.assign(static_cast<std::size_t>(opts.n_chains) * n_kept * d, 0.0);

  std::vector<long> accepted(opts.n_chains, 0);
  const auto t0 = std::chrono::steady_clock::now();
  numcore::parallel_blocks(opts.n_chains, opts.threads, [&](int c) {
    const std::uint64_t seed = opts.seed ^ static_cast<std::uint64_t>(c);
    Rng rng(seed);
    Vec z(d);
    for (auto& v : z) v = rng.normal();
    double logp = target.logp(z);
    double* dst = out.z.data() + static_cast<std::size_t>(c) * n_kept * d;
    long kept = 0;
    for (long s = 1; s <= opts.n_steps; ++s) {
      if (hmc_latent_step(target, z, logp, rng, opts.step_size, opts.n_leapfrog)) {
        ++accepted[c];
      }
      if (s % opts.thin == 0 && kept < n_kept) {
        for (int i = 0; i < d; ++i) dst[kept * d + i] = z[i];
        ++kept;
      }
    }
  });
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.proposed = static_cast<long>(opts.n_chains) * opts.n_steps;
  for (long a : accepted) out.accepted += a;
  return out;
}

}  // namespace discflow::samplers
