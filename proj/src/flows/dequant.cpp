#include "discflow/flows/dequant.hpp"

#include <cmath>

#include "discflow/flows/stack.hpp"

namespace discflow::flows {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

double log_std_normal(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return -0.5 * s - 0.5 * kLog2Pi * static_cast<double>(v.size());
}

Vec DequantFlow::encode(std::span<const int> theta) const {
  numcore::require_dim(theta.size(), static_cast<std::size_t>(dim), "dequant theta");
  Vec ctx(theta.size());
  if (levels <= 1) {
    std::fill(ctx.begin(), ctx.end(), 0.0);
    return ctx;
  }
  const double denom = static_cast<double>(levels - 1);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    ctx[i] = 2.0 * static_cast<double>(theta[i]) / denom - 1.0;
  }
  return ctx;
}

std::pair<Vec, double> DequantFlow::sample(std::span<const int> theta, const Vec& eps) const {
  numcore::require_dim(eps.size(), static_cast<std::size_t>(dim), "dequant eps");
  numcore::require_finite(eps, "dequant eps");
  const Vec ctx = encode(theta);
  Vec v = eps;
  double logdet = 0.0;
  for (const auto& layer : layers) logdet += layer.forward(v, ctx);
  Vec u;
  logdet += sigmoid_layer(v, u);
  const double logq = log_std_normal(eps) - logdet;
  return {std::move(u), logq};
}

DequantFlow::LogqResult DequantFlow::logq(std::span<const int> theta, const Vec& u) const {
  InvCache cache;
  LogqResult res;
  res.logq = logq_cached(theta, u, cache);
  res.eps = std::move(cache.eps);
  return res;
}

double DequantFlow::logq_cached(std::span<const int> theta, const Vec& u, InvCache& cache) const {
  numcore::require_dim(u.size(), static_cast<std::size_t>(dim), "dequant u");
  cache.ctx = encode(theta);
  cache.u = u;
  Vec v;
  double logdet_inv = logit_layer(u, v);
  cache.coupling.assign(layers.size(), {});
  std::size_t ci = 0;
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    logdet_inv += it->inverse_cached(v, cache.ctx, cache.coupling[ci++]);
  }
  cache.eps = std::move(v);
  // log q = log p(eps) + log |d eps / d u| = log p(eps) - logdet_forward.
  return log_std_normal(cache.eps) + logdet_inv;
}

Vec DequantFlow::logq_backward(const InvCache& cache, double upstream,
                               std::vector<Mlp>& grads) const {
  Vec g(cache.eps.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = -upstream * cache.eps[i];
  // Walk the inverse computation in reverse: couplings were executed last
  // layer first, so the backward visits them first layer first.
  std::size_t ci = cache.coupling.size();
  std::size_t gi = 0;
  for (auto it = layers.begin(); it != layers.end(); ++it, ++gi) {
    --ci;
    it->inverse_backward(cache.coupling[ci], g, upstream, grads[gi]);
  }
  Vec gu;
  logit_backward(cache.u, g, upstream, gu);
  return gu;
}

DequantFlow make_dequant_flow(int dim, int levels, int n_coupling, int hidden_width,
                              int hidden_layers, double clamp, Rng& rng) {
  if (dim <= 0) throw DimensionError("make_dequant_flow: dim must be positive");
  DequantFlow f;
  f.dim = dim;
  f.levels = levels;
  for (int i = 0; i < n_coupling; ++i) {
    f.layers.emplace_back(
        CouplingLayer(parity_mask(dim, i % 2 == 0), dim, hidden_width, hidden_layers, clamp, rng));
  }
  return f;
}

}  // namespace discflow::flows
