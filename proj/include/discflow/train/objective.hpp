#pragma once

#include "discflow/numcore/mlp.hpp"
#include "discflow/train/latent_density.hpp"

namespace discflow::train {

using numcore::Mlp;

// Conditioner gradients for both flows, aligned with coupling-layer order.
struct FlowGrads {
  std::vector<Mlp> phi;
  std::vector<Mlp> lambda;
};

FlowGrads zero_grads(const FlowStack& tphi, const DequantFlow& tlambda);
void add_grads(FlowGrads& dst, const FlowGrads& src);
void scale_grads(FlowGrads& g, double alpha);
double grads_norm(const FlowGrads& g);

struct ObjectiveOptions {
  // Straight-through surrogate: pass a discrete central difference of
  // log pi through the floor as if d theta / d x = I. Off by default; the
  // plain objective treats log pi(theta) as piecewise constant.
  bool straight_through = false;
  int blocks = 16;   // fixed reduction granularity, independent of threads
  int threads = 1;
};

struct ObjectiveResult {
  double value = 0.0;      // batch mean of log p~(z_i); maximized
  double ood_rate = 0.0;   // fraction of the batch with the out-of-domain flag
  double grad_norm = 0.0;  // L2 norm over all conditioner gradients
  FlowGrads grads;         // gradients of `value` (ascent direction)
};

// z_batch holds batch_size contiguous d-vectors. Throws NumericError with the
// offending z recorded if any per-sample value is non-finite.
ObjectiveResult objective_and_grads(const LatentDensity& l, const std::vector<Vec>& z_batch,
                                    const ObjectiveOptions& opts = {});

}  // namespace discflow::train
