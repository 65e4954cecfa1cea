#pragma once

#include "discflow/flows/dequant.hpp"
#include "discflow/flows/rounding.hpp"
#include "discflow/flows/stack.hpp"
#include "discflow/targets/target.hpp"

namespace discflow::train {

using flows::DequantFlow;
using flows::FlowStack;
using flows::Vec;
using targets::DiscreteTarget;

// The pullback of the discrete target through floor(T_phi(z)) with the
// learned dequantizer:
//   log p~(z) = log pi(theta) + log N(eps) - logdet_lambda(eps) + logdet_phi(z)
// with x = T_phi(z), theta = floor(x) clamped into the grid (flagged when
// clamping occurred), u = frac(x) pulled to the box interior, and
// eps = T_lambda^{-1}(u; theta). The interior clamp makes log p~ finite
// everywhere and vanishingly small on out-of-domain regions, so MH chains
// cannot escape the grid's image.
struct LatentDensity {
  const FlowStack* tphi = nullptr;
  const DequantFlow* tlambda = nullptr;
  const DiscreteTarget* target = nullptr;

  LatentDensity(const FlowStack& phi, const DequantFlow& lambda, const DiscreteTarget& pi);

  int dim() const { return tphi->dim; }
};

struct LatentEval {
  double logp = 0.0;
  std::vector<int> theta;
  bool out_of_domain = false;
};

LatentEval latent_logdensity(const LatentDensity& l, const Vec& z);

// Also fills grad_z with the gradient of the continuous part of log p~
// (log pi(theta) is piecewise constant and contributes nothing; saturated
// interior clamps contribute zero as well). Used by the HMC sampler.
LatentEval latent_logdensity_grad(const LatentDensity& l, const Vec& z, Vec& grad_z);

}  // namespace discflow::train
