#pragma once

#include <span>
#include <utility>
#include <vector>

#include "discflow/flows/coupling.hpp"
#include "discflow/flows/layers.hpp"

namespace discflow::flows {

// Conditional dequantization flow: a stack of coupling layers whose
// conditioners also see the encoded theta, followed by an elementwise sigmoid,
// mapping Gaussian noise eps to a box offset u in (0,1)^d. Defines the
// learned density q(u | theta) via the change of variables
//   log q(u|theta) = log N(eps; 0, I) - logdet_forward(eps).
struct DequantFlow {
  int dim = 0;
  int levels = 2;
  std::vector<CouplingLayer> layers;

  // theta min-max encoded to [-1, 1]; a single-level grid encodes to 0.
  Vec encode(std::span<const int> theta) const;

  // eps -> (u, log q(u|theta)).
  std::pair<Vec, double> sample(std::span<const int> theta, const Vec& eps) const;

  struct LogqResult {
    double logq = 0.0;
    Vec eps;
  };
  // u -> log q(u|theta), recovering eps. Throws DomainError for u outside (0,1)^d.
  LogqResult logq(std::span<const int> theta, const Vec& u) const;

  struct InvCache {
    Vec ctx;
    Vec u;
    Vec eps;
    std::vector<CouplingLayer::Cache> coupling;  // in execution order (last layer first)
  };
  double logq_cached(std::span<const int> theta, const Vec& u, InvCache& cache) const;

  // d(upstream * logq)/du, accumulating conditioner gradients into grads
  // (aligned with `layers` order).
  Vec logq_backward(const InvCache& cache, double upstream, std::vector<Mlp>& grads) const;
};

// Standard normal log-density, the dequantizer's base measure.
double log_std_normal(const Vec& v);

DequantFlow make_dequant_flow(int dim, int levels, int n_coupling, int hidden_width,
                              int hidden_layers, double clamp, Rng& rng);

}  // namespace discflow::flows
