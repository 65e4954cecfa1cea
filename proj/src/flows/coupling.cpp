#include "discflow/flows/coupling.hpp"

#include <cmath>

namespace discflow::flows {

namespace {

std::vector<int> indices_where(const std::vector<std::uint8_t>& mask, bool pass) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if ((mask[i] != 0) == pass) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

}  // namespace

CouplingLayer::CouplingLayer(std::vector<std::uint8_t> mask, int ctx_dim, int hidden_width,
                             int hidden_layers, double clamp, Rng& rng)
    : mask_(std::move(mask)),
      pass_(indices_where(mask_, true)),
      trans_(indices_where(mask_, false)),
      ctx_dim_(ctx_dim),
      clamp_(clamp) {
  if (trans_.empty()) throw DimensionError("CouplingLayer: mask transforms no coordinates");
  if (mask_.size() >= 2 && pass_.empty()) {
    throw DimensionError("CouplingLayer: mask passes no coordinates");
  }
  std::vector<int> dims;
  dims.push_back(static_cast<int>(pass_.size()) + ctx_dim_);
  for (int h = 0; h < hidden_layers; ++h) dims.push_back(hidden_width);
  dims.push_back(2 * static_cast<int>(trans_.size()));
  cond_ = Mlp::make(dims);
  numcore::init_uniform_xavier(cond_, rng, /*zero_last=*/true);
}

CouplingLayer::CouplingLayer(std::vector<std::uint8_t> mask, int ctx_dim, double clamp,
                             Mlp conditioner)
    : mask_(std::move(mask)),
      pass_(indices_where(mask_, true)),
      trans_(indices_where(mask_, false)),
      ctx_dim_(ctx_dim),
      clamp_(clamp),
      cond_(std::move(conditioner)) {
  if (trans_.empty()) throw DimensionError("CouplingLayer: mask transforms no coordinates");
  if (cond_.input_dim() != static_cast<int>(pass_.size()) + ctx_dim_ ||
      cond_.output_dim() != 2 * static_cast<int>(trans_.size())) {
    throw DimensionError("CouplingLayer: conditioner shape mismatch");
  }
}

void CouplingLayer::scales_and_shifts(const Vec& v, const Vec& ctx, Cache& cache, Vec& s,
                                      Vec& t) const {
  numcore::require_dim(v.size(), mask_.size(), "coupling input");
  numcore::require_dim(ctx.size(), static_cast<std::size_t>(ctx_dim_), "coupling ctx");
  Vec h(pass_.size() + ctx.size());
  for (std::size_t i = 0; i < pass_.size(); ++i) h[i] = v[pass_[i]];
  for (std::size_t i = 0; i < ctx.size(); ++i) h[pass_.size() + i] = ctx[i];
  const Vec out = mlp_forward_cached(cond_, h, cache.mlp);
  if (!numcore::all_finite(out)) throw NumericError("coupling: non-finite conditioner output");
  const std::size_t q = trans_.size();
  s.resize(q);
  t.resize(q);
  cache.tanh_su.resize(q);
  for (std::size_t i = 0; i < q; ++i) {
    const double th = std::tanh(out[i] / clamp_);
    cache.tanh_su[i] = th;
    s[i] = clamp_ * th;
    t[i] = out[q + i];
  }
}

double CouplingLayer::forward_cached(Vec& v, const Vec& ctx, Cache& cache) const {
  Vec s, t;
  scales_and_shifts(v, ctx, cache, s, t);
  const std::size_t q = trans_.size();
  cache.trans_in.resize(q);
  cache.exp_s.resize(q);
  double logdet = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    const double es = std::exp(s[i]);
    cache.trans_in[i] = v[trans_[i]];
    cache.exp_s[i] = es;
    v[trans_[i]] = v[trans_[i]] * es + t[i];
    logdet += s[i];
  }
  return logdet;
}

double CouplingLayer::inverse_cached(Vec& v, const Vec& ctx, Cache& cache) const {
  Vec s, t;
  scales_and_shifts(v, ctx, cache, s, t);
  const std::size_t q = trans_.size();
  cache.trans_in.resize(q);
  cache.exp_s.resize(q);
  double logdet = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    const double ens = std::exp(-s[i]);
    const double z = (v[trans_[i]] - t[i]) * ens;
    cache.trans_in[i] = z;
    cache.exp_s[i] = ens;
    v[trans_[i]] = z;
    logdet -= s[i];
  }
  return logdet;
}

double CouplingLayer::forward(Vec& v, const Vec& ctx) const {
  Cache cache;
  return forward_cached(v, ctx, cache);
}

double CouplingLayer::inverse(Vec& v, const Vec& ctx) const {
  Cache cache;
  return inverse_cached(v, ctx, cache);
}

void CouplingLayer::forward_backward(const Cache& cache, Vec& g, double g_logdet,
                                     Mlp& grad) const {
  const std::size_t q = trans_.size();
  // x_B = z_B e^s + t; logdet = sum s.
  Vec up(2 * q);
  for (std::size_t i = 0; i < q; ++i) {
    const double gx = g[trans_[i]];
    const double gs = gx * cache.trans_in[i] * cache.exp_s[i] + g_logdet;
    up[i] = gs * (1.0 - cache.tanh_su[i] * cache.tanh_su[i]);  // through the tanh clamp
    up[q + i] = gx;                                            // dt
    g[trans_[i]] = gx * cache.exp_s[i];                        // dz_B
  }
  const Vec gh = mlp_backward_cached(cond_, cache.mlp, up, grad);
  for (std::size_t i = 0; i < pass_.size(); ++i) g[pass_[i]] += gh[i];
}

void CouplingLayer::inverse_backward(const Cache& cache, Vec& g, double g_logdet,
                                     Mlp& grad) const {
  const std::size_t q = trans_.size();
  // z_B = (x_B - t) e^{-s}; logdet = -sum s.
  Vec up(2 * q);
  for (std::size_t i = 0; i < q; ++i) {
    const double gz = g[trans_[i]];
    const double gs = -gz * cache.trans_in[i] - g_logdet;
    up[i] = gs * (1.0 - cache.tanh_su[i] * cache.tanh_su[i]);
    up[q + i] = -gz * cache.exp_s[i];  // dt
    g[trans_[i]] = gz * cache.exp_s[i];
  }
  const Vec gh = mlp_backward_cached(cond_, cache.mlp, up, grad);
  for (std::size_t i = 0; i < pass_.size(); ++i) g[pass_[i]] += gh[i];
}

}  // namespace discflow::flows
