#pragma once

#include "discflow/flows/rounding.hpp"
#include "discflow/flows/stack.hpp"
#include "discflow/samplers/latent_mh.hpp"

namespace discflow::samplers {

// Pushes kept latent samples to the discrete domain: theta = floor(T_phi(z)),
// clamped into the grid. Returns [chain][kept][dim] like the latent result;
// ood_count, when non-null, receives the number of clamped samples.
std::vector<int> push_samples(const flows::FlowStack& tphi, const LatentRunResult& run,
                              int levels, long* ood_count = nullptr);

// Direct flow sampling (no MCMC): z ~ N(0, I) pushed through T_phi and floored.
std::vector<int> flow_direct_samples(const flows::FlowStack& tphi, int levels, long n,
                                     std::uint64_t seed, long* ood_count = nullptr);

}  // namespace discflow::samplers
