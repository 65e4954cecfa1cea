#include "discflow/numcore/adam.hpp"

#include <cmath>

namespace discflow::numcore {

AdamState AdamState::make(const Mlp& shape, double lr) {
  AdamState st;
  st.lr = lr;
  st.m = zeros_like(shape);
  st.v = zeros_like(shape);
  return st;
}

namespace {

void update_span(std::span<double> p, std::span<const double> g, std::span<double> m,
                 std::span<double> v, const AdamState& st, double corr1, double corr2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(g[i])) throw NumericError("adam_step: non-finite gradient");
    m[i] = st.beta1 * m[i] + (1.0 - st.beta1) * g[i];
    v[i] = st.beta2 * v[i] + (1.0 - st.beta2) * g[i] * g[i];
    const double mhat = m[i] / corr1;
    const double vhat = v[i] / corr2;
    p[i] -= st.lr * mhat / (std::sqrt(vhat) + st.eps);
  }
}

}  // namespace

void adam_step(Mlp& params, const Mlp& grads, AdamState& state) {
  if (params.w.size() != grads.w.size()) {
    throw DimensionError("adam_step: gradient shape mismatch");
  }
  state.t += 1;
  const double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    if (params.w[l].a.size() != grads.w[l].a.size() || params.b[l].size() != grads.b[l].size()) {
      throw DimensionError("adam_step: gradient shape mismatch");
    }
    update_span(params.w[l].a, grads.w[l].a, state.m.w[l].a, state.v.w[l].a, state, corr1, corr2);
    update_span(params.b[l], grads.b[l], state.m.b[l], state.v.b[l], state, corr1, corr2);
  }
}

}  // namespace discflow::numcore
