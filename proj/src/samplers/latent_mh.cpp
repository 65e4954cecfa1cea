#include "discflow/samplers/latent_mh.hpp"

#include <chrono>
#include <cmath>

#include "discflow/numcore/parallel.hpp"

namespace discflow::samplers {

bool mh_latent_step(LatentChain& chain, const LatentLogDensity& target, double sigma_prop) {
  chain.proposed += 1;
  const std::size_t d = chain.z.size();
  Vec prop(d);
  for (std::size_t i = 0; i < d; ++i) prop[i] = chain.z[i] + sigma_prop * chain.rng.normal();
  const auto ev = target.eval(prop);
  if (!std::isfinite(ev.logp)) {
    chain.nonfinite_rejects += 1;
    return false;
  }
  const double log_alpha = ev.logp - chain.logp;
  bool accept = log_alpha >= 0.0;
  if (!accept) accept = std::log(chain.rng.uniform() + 1e-300) < log_alpha;
  if (accept) {
    chain.z = std::move(prop);
    chain.logp = ev.logp;
    chain.ood = ev.out_of_domain;
    chain.accepted += 1;
  }
  return accept;
}

std::uint64_t chain_init_seed(std::uint64_t master, int chain_id) {
  return master ^ static_cast<std::uint64_t>(chain_id);
}

std::uint64_t chain_walk_seed(std::uint64_t master, int chain_id) {
  return chain_init_seed(master, chain_id) + 0x9e3779b97f4a7c15ull;
}

LatentRunResult run_latent_mh(const LatentLogDensity& target, const LatentRunOptions& opts) {
  if (opts.n_chains <= 0 || opts.n_steps < 0 || opts.thin <= 0) {
    throw ConfigError("run_latent_mh: chains, steps and thin must be positive");
  }
  const int d = target.dim();
  const long n_kept = opts.n_steps / opts.thin;

  LatentRunResult out;
  out.n_chains = opts.n_chains;
  out.n_kept = n_kept;
  out.dim = d;
  out.z.assign(static_cast<std::size_t>(opts.n_chains) * n_kept * d, 0.0);

  std::vector<LatentChain> chains;
  chains.reserve(opts.n_chains);
  for (int c = 0; c < opts.n_chains; ++c) {
    Rng init(chain_init_seed(opts.seed, c));
    Vec z0(d);
    for (auto& v : z0) v = init.normal();
    chains.emplace_back(std::move(z0), chain_walk_seed(opts.seed, c));
    const auto ev = target.eval(chains.back().z);
    chains.back().logp = ev.logp;
    chains.back().ood = ev.out_of_domain;
  }

  // Optional step-size adaptation on a throwaway copy of chain 0.
  double sigma = opts.sigma_prop;
  if (opts.adapt && opts.adapt_steps > 0) {
    LatentChain probe = chains[0];
    double log_sigma = std::log(sigma);
    for (long s = 0; s < opts.adapt_steps; ++s) {
      const bool acc = mh_latent_step(probe, target, std::exp(log_sigma));
      const double rate = 1.0 / std::sqrt(static_cast<double>(s + 1));
      log_sigma += rate * ((acc ? 1.0 : 0.0) - opts.adapt_target);
    }
    sigma = std::exp(log_sigma);
  }
  out.sigma_used = sigma;

  const auto t0 = std::chrono::steady_clock::now();
  numcore::parallel_blocks(opts.n_chains, opts.threads, [&](int c) {
    LatentChain& chain = chains[c];
    double* dst = out.z.data() + static_cast<std::size_t>(c) * n_kept * d;
    long kept = 0;
    for (long s = 1; s <= opts.n_steps; ++s) {
      mh_latent_step(chain, target, sigma);
      if (s % opts.thin == 0 && kept < n_kept) {
        for (int i = 0; i < d; ++i) dst[kept * d + i] = chain.z[i];
        ++kept;
      }
    }
  });
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& c : chains) {
    out.proposed += c.proposed;
    out.accepted += c.accepted;
    out.nonfinite_rejects += c.nonfinite_rejects;
  }
  return out;
}

LatentRunResult run_latent_mh(const train::LatentDensity& density, const LatentRunOptions& opts) {
  const DensityView view(density);
  return run_latent_mh(static_cast<const LatentLogDensity&>(view), opts);
}

}  // namespace discflow::samplers
