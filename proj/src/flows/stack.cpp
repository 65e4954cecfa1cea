#include "discflow/flows/stack.hpp"

#include <algorithm>
#include <cmath>

namespace discflow::flows {

AffineLayer::AffineLayer(Vec s, Vec c) : scale(std::move(s)), shift(std::move(c)) {
  if (scale.size() != shift.size()) throw DimensionError("AffineLayer: shape mismatch");
  logdet = 0.0;
  for (double v : scale) {
    if (!(v > 0.0)) throw DomainError("AffineLayer: scale must be positive");
    logdet += std::log(v);
  }
}

int FlowStack::n_coupling() const {
  int n = 0;
  for (const auto& l : layers) {
    if (std::holds_alternative<CouplingLayer>(l)) ++n;
  }
  return n;
}

namespace {

const Vec kEmptyCtx;

double apply_forward(const FlowLayer& layer, Vec& v) {
  if (const auto* c = std::get_if<CouplingLayer>(&layer)) return c->forward(v, kEmptyCtx);
  if (std::holds_alternative<ReverseLayer>(layer)) {
    std::reverse(v.begin(), v.end());
    return 0.0;
  }
  const auto& a = std::get<AffineLayer>(layer);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.scale[i] * v[i] + a.shift[i];
  return a.logdet;
}

double apply_inverse(const FlowLayer& layer, Vec& v) {
  if (const auto* c = std::get_if<CouplingLayer>(&layer)) return c->inverse(v, kEmptyCtx);
  if (std::holds_alternative<ReverseLayer>(layer)) {
    std::reverse(v.begin(), v.end());
    return 0.0;
  }
  const auto& a = std::get<AffineLayer>(layer);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] - a.shift[i]) / a.scale[i];
  return -a.logdet;
}

}  // namespace

std::pair<Vec, double> stack_forward(const FlowStack& f, const Vec& z) {
  numcore::require_dim(z.size(), static_cast<std::size_t>(f.dim), "stack_forward input");
  Vec v = z;
  double logdet = 0.0;
  for (const auto& layer : f.layers) logdet += apply_forward(layer, v);
  return {std::move(v), logdet};
}

std::pair<Vec, double> stack_inverse(const FlowStack& f, const Vec& x) {
  numcore::require_dim(x.size(), static_cast<std::size_t>(f.dim), "stack_inverse input");
  Vec v = x;
  double logdet = 0.0;
  for (auto it = f.layers.rbegin(); it != f.layers.rend(); ++it) {
    logdet += apply_inverse(*it, v);
  }
  return {std::move(v), logdet};
}

double stack_forward_cached(const FlowStack& f, Vec& v, StackCache& cache) {
  cache.coupling.assign(f.n_coupling(), {});
  double logdet = 0.0;
  std::size_t ci = 0;
  for (const auto& layer : f.layers) {
    if (const auto* c = std::get_if<CouplingLayer>(&layer)) {
      logdet += c->forward_cached(v, kEmptyCtx, cache.coupling[ci++]);
    } else {
      logdet += apply_forward(layer, v);
    }
  }
  return logdet;
}

void stack_forward_backward(const FlowStack& f, const StackCache& cache, Vec& g, double g_logdet,
                            std::vector<Mlp>& grads) {
  std::size_t ci = cache.coupling.size();
  std::size_t gi = grads.size();
  for (auto it = f.layers.rbegin(); it != f.layers.rend(); ++it) {
    if (const auto* c = std::get_if<CouplingLayer>(&*it)) {
      --ci;
      --gi;
      c->forward_backward(cache.coupling[ci], g, g_logdet, grads[gi]);
    } else if (std::holds_alternative<ReverseLayer>(*it)) {
      std::reverse(g.begin(), g.end());
    } else {
      const auto& a = std::get<AffineLayer>(*it);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= a.scale[i];
    }
  }
}

std::vector<std::uint8_t> parity_mask(int dim, bool pass_even) {
  std::vector<std::uint8_t> mask(dim, 0);
  if (dim == 1) return mask;  // single coordinate: transform it
  for (int i = 0; i < dim; ++i) {
    mask[i] = static_cast<std::uint8_t>(((i % 2 == 0) == pass_even) ? 1 : 0);
  }
  return mask;
}

FlowStack make_flow_stack(int dim, int n_coupling, int hidden_width, int hidden_layers,
                          double clamp, Rng& rng, const std::optional<RangeMap>& range) {
  if (dim <= 0) throw DimensionError("make_flow_stack: dim must be positive");
  FlowStack f;
  f.dim = dim;
  for (int i = 0; i < n_coupling; ++i) {
    f.layers.emplace_back(
        CouplingLayer(parity_mask(dim, i % 2 == 0), 0, hidden_width, hidden_layers, clamp, rng));
    if (i % 2 == 1 && i + 1 < n_coupling && dim > 1) f.layers.emplace_back(ReverseLayer{});
  }
  if (range) {
    if (static_cast<int>(range->lo.size()) != dim || static_cast<int>(range->hi.size()) != dim) {
      throw DimensionError("make_flow_stack: range map shape mismatch");
    }
    Vec scale(dim), shift(dim);
    for (int i = 0; i < dim; ++i) {
      scale[i] = (range->hi[i] - range->lo[i]) / (2.0 * range->extent);
      shift[i] = range->lo[i] + scale[i] * range->extent;
    }
    f.layers.emplace_back(AffineLayer(std::move(scale), std::move(shift)));
  }
  return f;
}

}  // namespace discflow::flows
