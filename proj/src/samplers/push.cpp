#include "discflow/samplers/push.hpp"

namespace discflow::samplers {

std::vector<int> push_samples(const flows::FlowStack& tphi, const LatentRunResult& run,
                              int levels, long* ood_count) {
  std::vector<int> out(static_cast<std::size_t>(run.n_chains) * run.n_kept * run.dim);
  long ood = 0;
  Vec z(run.dim);
  for (int c = 0; c < run.n_chains; ++c) {
    for (long t = 0; t < run.n_kept; ++t) {
      const double* src = run.sample(c, t);
      z.assign(src, src + run.dim);
      const auto [x, logdet] = stack_forward(tphi, z);
      (void)logdet;
      const auto r = flows::round_forward(x, levels);
      if (r.out_of_domain) ++ood;
      int* dst = out.data() + (static_cast<std::size_t>(c) * run.n_kept + t) * run.dim;
      for (int i = 0; i < run.dim; ++i) dst[i] = r.theta[i];
    }
  }
  if (ood_count) *ood_count = ood;
  return out;
}

std::vector<int> flow_direct_samples(const flows::FlowStack& tphi, int levels, long n,
                                     std::uint64_t seed, long* ood_count) {
  numcore::Rng rng(seed);
  const int d = tphi.dim;
  std::vector<int> out(static_cast<std::size_t>(n) * d);
  long ood = 0;
  for (long s = 0; s < n; ++s) {
    const Vec z = rng.normal_vec(d);
    const auto [x, logdet] = stack_forward(tphi, z);
    (void)logdet;
    const auto r = flows::round_forward(x, levels);
    if (r.out_of_domain) ++ood;
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(s) * d + i] = r.theta[i];
  }
  if (ood_count) *ood_count = ood;
  return out;
}

}  // namespace discflow::samplers
