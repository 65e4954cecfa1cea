#pragma once

#include <cstdint>

#include "discflow/numcore/mlp.hpp"

namespace discflow::numcore {

// Adam with bias correction. Moment accumulators mirror the parameter shapes.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t t = 0;
  Mlp m;
  Mlp v;

  static AdamState make(const Mlp& shape, double lr);
};

// One descent step: params -= lr * m_hat / (sqrt(v_hat) + eps).
// Throws NumericError on non-finite gradients.
void adam_step(Mlp& params, const Mlp& grads, AdamState& state);

}  // namespace discflow::numcore
