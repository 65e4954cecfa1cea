#pragma once

#include <utility>
#include <vector>

#include "discflow/numcore/mat.hpp"
#include "discflow/numcore/rng.hpp"
#include "discflow/numcore/vec.hpp"

namespace discflow::numcore {

/// Fully connected network with tanh hidden activations and an identity
/// output layer. Gradients are exact reverse accumulation, derived by hand.
struct Mlp {
  std::vector<Mat> w;
  std::vector<Vec> b;

  // layer_dims = {in, hidden..., out}, at least {in, out}.
  static Mlp make(const std::vector<int>& layer_dims);

  int input_dim() const { return w.empty() ? 0 : w.front().cols; }
  int output_dim() const { return w.empty() ? 0 : b.back().size(); }
  int n_layers() const { return static_cast<int>(w.size()); }

  std::size_t param_count() const;
};

// Activations cached during the forward pass: act[0] is the input, act[l]
// for l >= 1 is the post-tanh input to layer l.
struct MlpCache {
  std::vector<Vec> act;
};

Vec mlp_forward(const Mlp& params, const Vec& input);
Vec mlp_forward_cached(const Mlp& params, const Vec& input, MlpCache& cache);

// Reverse accumulation of upstream^T * output. Accumulates parameter
// gradients into grad_accum (same shape as params) and returns the input
// gradient.
Vec mlp_backward_cached(const Mlp& params, const MlpCache& cache, const Vec& upstream,
                        Mlp& grad_accum);

// Convenience form matching the one-shot contract.
std::pair<Mlp, Vec> mlp_backward(const Mlp& params, const Vec& input, const Vec& upstream);

Mlp zeros_like(const Mlp& m);
void add_scaled(Mlp& dst, const Mlp& src, double alpha);
double grad_sq_norm(const Mlp& m);

// Uniform(-s, s) with s = sqrt(6 / (fan_in + fan_out)); biases zero.
// zero_last zeroes the final layer so a conditioner starts as the identity map.
void init_uniform_xavier(Mlp& m, Rng& rng, bool zero_last);

}  // namespace discflow::numcore
