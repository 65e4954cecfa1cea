#pragma once

// Shared flow construction helpers for tests.

#include <cmath>

#include "discflow/flows/dequant.hpp"
#include "discflow/flows/stack.hpp"

namespace flow_helpers {

using discflow::flows::CouplingLayer;
using discflow::flows::DequantFlow;
using discflow::flows::FlowStack;
using discflow::numcore::Mlp;
using discflow::numcore::Rng;
using discflow::numcore::Vec;

// Conditioner that ignores its input and always emits scale logit s and
// shift t (biases of a zeroed final layer; the tanh clamp is pre-inverted).
inline CouplingLayer forced_coupling(std::vector<std::uint8_t> mask, int ctx_dim, double s,
                                     double t, double clamp = 5.0) {
  Rng rng(0);
  CouplingLayer layer(std::move(mask), ctx_dim, 8, 1, clamp, rng);
  Mlp& cond = layer.conditioner();
  for (auto& w : cond.w)
    for (auto& v : w.a) v = 0.0;
  for (auto& b : cond.b)
    for (auto& v : b) v = 0.0;
  const std::size_t q = layer.trans_idx().size();
  const double s_raw = clamp * std::atanh(s / clamp);
  for (std::size_t i = 0; i < q; ++i) {
    cond.b.back()[i] = s_raw;
    cond.b.back()[q + i] = t;
  }
  return layer;
}

// Random (non-identity) coupling layer with modest weights.
inline CouplingLayer random_coupling(std::vector<std::uint8_t> mask, int ctx_dim, Rng& rng,
                                     double scale = 0.5) {
  CouplingLayer layer(std::move(mask), ctx_dim, 8, 2, 5.0, rng);
  Mlp& cond = layer.conditioner();
  for (auto& w : cond.w)
    for (auto& v : w.a) v = scale * (2.0 * rng.uniform() - 1.0);
  for (auto& b : cond.b)
    for (auto& v : b) v = 0.3 * (2.0 * rng.uniform() - 1.0);
  return layer;
}

inline FlowStack random_stack(int dim, int n_coupling, Rng& rng, double scale = 0.5) {
  FlowStack f;
  f.dim = dim;
  for (int i = 0; i < n_coupling; ++i) {
    f.layers.emplace_back(
        random_coupling(discflow::flows::parity_mask(dim, i % 2 == 0), 0, rng, scale));
    if (i % 2 == 1 && i + 1 < n_coupling && dim > 1) {
      f.layers.emplace_back(discflow::flows::ReverseLayer{});
    }
  }
  return f;
}

inline DequantFlow random_dequant(int dim, int levels, int n_coupling, Rng& rng,
                                  double scale = 0.4) {
  DequantFlow f;
  f.dim = dim;
  f.levels = levels;
  for (int i = 0; i < n_coupling; ++i) {
    f.layers.emplace_back(
        random_coupling(discflow::flows::parity_mask(dim, i % 2 == 0), dim, rng, scale));
  }
  return f;
}

inline DequantFlow bare_sigmoid_dequant(int dim, int levels) {
  DequantFlow f;
  f.dim = dim;
  f.levels = levels;
  return f;
}

}  // namespace flow_helpers
