#include "discflow/samplers/discrete.hpp"

#include <chrono>
#include <cmath>

#include "discflow/numcore/parallel.hpp"

namespace discflow::samplers {

void gibbs_sweep(const DiscreteTarget& target, DiscreteChain& chain) {
  const int d = target.dim();
  const int k = target.levels();
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  for (int i = d - 1; i > 0; --i) {
    const int j = static_cast<int>(chain.rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[i], order[j]);
  }
  std::vector<double> logw(k);
  for (const int coord : order) {
    // Conditional over levels, relative to the current value.
    double m = -1e300;
    for (int v = 0; v < k; ++v) {
      logw[v] = target.log_prob_delta(chain.theta, coord, v);
      m = std::max(m, logw[v]);
    }
    double total = 0.0;
    for (int v = 0; v < k; ++v) {
      logw[v] = std::exp(logw[v] - m);
      total += logw[v];
    }
    const double r = chain.rng.uniform() * total;
    double acc = 0.0;
    int pick = k - 1;
    for (int v = 0; v < k; ++v) {
      acc += logw[v];
      if (r < acc) {
        pick = v;
        break;
      }
    }
    chain.theta[coord] = pick;
  }
}

bool discrete_mh_step(const DiscreteTarget& target, DiscreteChain& chain) {
  chain.proposed += 1;
  const int coord = static_cast<int>(chain.rng.uniform_int(static_cast<std::uint64_t>(target.dim())));
  const int value = static_cast<int>(chain.rng.uniform_int(static_cast<std::uint64_t>(target.levels())));
  const double log_alpha = target.log_prob_delta(chain.theta, coord, value);
  bool accept = log_alpha >= 0.0;
  if (!accept) accept = std::log(chain.rng.uniform() + 1e-300) < log_alpha;
  if (accept) {
    chain.theta[coord] = value;
    chain.accepted += 1;
  }
  return accept;
}

DiscreteRunResult run_discrete_baseline(const DiscreteTarget& target,
                                        const DiscreteRunOptions& opts) {
  if (opts.n_chains <= 0 || opts.n_steps < 0 || opts.thin <= 0 || opts.burn_in < 0) {
    throw ConfigError("run_discrete_baseline: bad chain configuration");
  }
  const int d = target.dim();
  const long n_kept = opts.n_steps / opts.thin;

  DiscreteRunResult out;
  out.n_chains = opts.n_chains;
  out.n_kept = n_kept;
  out.dim = d;
  out.theta.assign(static_cast<std::size_t>(opts.n_chains) * n_kept * d, 0);

  std::vector<DiscreteChain> chains;
  chains.reserve(opts.n_chains);
  for (int c = 0; c < opts.n_chains; ++c) {
    const std::uint64_t seed = opts.seed ^ static_cast<std::uint64_t>(c);
    Rng init(seed);
    std::vector<int> t0(d, 0);
    if (opts.init_random) {
      for (auto& v : t0) {
        v = static_cast<int>(init.uniform_int(static_cast<std::uint64_t>(target.levels())));
      }
    }
    chains.emplace_back(std::move(t0), seed + 0x9e3779b97f4a7c15ull);
  }

  const auto t0 = std::chrono::steady_clock::now();
  numcore::parallel_blocks(opts.n_chains, opts.threads, [&](int c) {
    DiscreteChain& chain = chains[c];
    auto step = [&] {
      if (opts.kind == BaselineKind::kGibbs) {
        gibbs_sweep(target, chain);
      } else {
        discrete_mh_step(target, chain);
      }
    };
    for (long s = 0; s < opts.burn_in; ++s) step();
    int* dst = out.theta.data() + static_cast<std::size_t>(c) * n_kept * d;
    long kept = 0;
    for (long s = 1; s <= opts.n_steps; ++s) {
      step();
      if (s % opts.thin == 0 && kept < n_kept) {
        for (int i = 0; i < d; ++i) dst[kept * d + i] = chain.theta[i];
        ++kept;
      }
    }
  });
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& c : chains) {
    out.proposed += c.proposed;
    out.accepted += c.accepted;
  }
  return out;
}

}  // namespace discflow::samplers
