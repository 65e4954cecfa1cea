#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "discflow/flows/coupling.hpp"

namespace discflow::flows {

// Full coordinate reversal; volume preserving.
struct ReverseLayer {};

// Fixed (non-trainable) per-coordinate affine map x = scale * v + shift.
// Used to place the latent N(0, I) bulk inside the target grid's box.
struct AffineLayer {
  Vec scale;
  Vec shift;
  double logdet = 0.0;  // sum log scale, cached

  AffineLayer() = default;
  AffineLayer(Vec s, Vec c);
};

using FlowLayer = std::variant<CouplingLayer, ReverseLayer, AffineLayer>;

// The main transport map: an ordered composition of layers mapping latent z
// to the continuous embedding x, with exact log-det-Jacobian accounting.
// Round trip and log-det antisymmetry hold to floating-point accuracy.
struct FlowStack {
  int dim = 0;
  std::vector<FlowLayer> layers;

  int n_coupling() const;
};

std::pair<Vec, double> stack_forward(const FlowStack& f, const Vec& z);
std::pair<Vec, double> stack_inverse(const FlowStack& f, const Vec& x);

struct StackCache {
  std::vector<CouplingLayer::Cache> coupling;
};

// In-place forward pass caching what the backward pass needs.
double stack_forward_cached(const FlowStack& f, Vec& v, StackCache& cache);

// Reverse accumulation through the forward pass. g is dL/dx on entry and
// dL/dz on exit; g_logdet is the upstream on the total log-det. Conditioner
// gradients accumulate into grads, aligned with coupling layers in stack order.
void stack_forward_backward(const FlowStack& f, const StackCache& cache, Vec& g, double g_logdet,
                            std::vector<Mlp>& grads);

struct RangeMap {
  Vec lo;        // per-dimension box lower bound
  Vec hi;        // per-dimension box upper bound
  double extent; // |z| <= extent maps onto [lo, hi]
};

// Alternating even/odd masks with a coordinate reversal after each coupling
// pair; optional terminal range map. d == 1 uses all-transform masks.
FlowStack make_flow_stack(int dim, int n_coupling, int hidden_width, int hidden_layers,
                          double clamp, Rng& rng, const std::optional<RangeMap>& range = {});

std::vector<std::uint8_t> parity_mask(int dim, bool pass_even);

}  // namespace discflow::flows
