#include "discflow/numcore/mlp.hpp"

#include <cmath>

namespace discflow::numcore {

Mlp Mlp::make(const std::vector<int>& layer_dims) {
  if (layer_dims.size() < 2) {
    throw DimensionError("Mlp::make: need at least input and output dims");
  }
  Mlp m;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    if (layer_dims[l] < 0 || layer_dims[l + 1] <= 0) {
      throw DimensionError("Mlp::make: invalid layer dimension");
    }
    m.w.emplace_back(layer_dims[l + 1], layer_dims[l]);
    m.b.emplace_back(layer_dims[l + 1], 0.0);
  }
  return m;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const auto& m : w) n += m.a.size();
  for (const auto& v : b) n += v.size();
  return n;
}

namespace {

void layer_eval(const Mat& w, const Vec& b, const Vec& in, Vec& out, bool apply_tanh) {
  out.resize(b.size());
  matvec(w, in, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += b[i];
    if (apply_tanh) out[i] = std::tanh(out[i]);
  }
}

}  // namespace

Vec mlp_forward(const Mlp& params, const Vec& input) {
  require_dim(input.size(), static_cast<std::size_t>(params.input_dim()), "mlp_forward input");
  require_finite(input, "mlp_forward input");
  Vec cur = input;
  Vec next;
  const int L = params.n_layers();
  for (int l = 0; l < L; ++l) {
    layer_eval(params.w[l], params.b[l], cur, next, l + 1 < L);
    cur.swap(next);
  }
  return cur;
}

Vec mlp_forward_cached(const Mlp& params, const Vec& input, MlpCache& cache) {
  require_dim(input.size(), static_cast<std::size_t>(params.input_dim()), "mlp_forward input");
  const int L = params.n_layers();
  cache.act.assign(L, {});
  cache.act[0] = input;
  Vec out;
  for (int l = 0; l < L; ++l) {
    layer_eval(params.w[l], params.b[l], cache.act[l], out, l + 1 < L);
    if (l + 1 < L) cache.act[l + 1] = out;
  }
  return out;
}

Vec mlp_backward_cached(const Mlp& params, const MlpCache& cache, const Vec& upstream,
                        Mlp& grad_accum) {
  const int L = params.n_layers();
  require_dim(upstream.size(), static_cast<std::size_t>(params.output_dim()),
              "mlp_backward upstream");
  Vec delta = upstream;
  Vec ga;
  for (int l = L - 1; l >= 0; --l) {
    const Vec& a = cache.act[l];
    outer_acc(delta, a, grad_accum.w[l]);
    axpy(1.0, delta, grad_accum.b[l]);
    ga.resize(a.size());
    matvec_t(params.w[l], delta, ga);
    if (l > 0) {
      // a = tanh(pre-activation), so tanh' = 1 - a^2.
      delta.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) delta[i] = ga[i] * (1.0 - a[i] * a[i]);
    }
  }
  return ga;
}

std::pair<Mlp, Vec> mlp_backward(const Mlp& params, const Vec& input, const Vec& upstream) {
  MlpCache cache;
  mlp_forward_cached(params, input, cache);
  Mlp grads = zeros_like(params);
  Vec gin = mlp_backward_cached(params, cache, upstream, grads);
  return {std::move(grads), std::move(gin)};
}

Mlp zeros_like(const Mlp& m) {
  Mlp z;
  for (const auto& w : m.w) z.w.emplace_back(w.rows, w.cols);
  for (const auto& b : m.b) z.b.emplace_back(b.size(), 0.0);
  return z;
}

void add_scaled(Mlp& dst, const Mlp& src, double alpha) {
  for (std::size_t l = 0; l < dst.w.size(); ++l) {
    axpy(alpha, src.w[l].a, dst.w[l].a);
    axpy(alpha, src.b[l], dst.b[l]);
  }
}

double grad_sq_norm(const Mlp& m) {
  double s = 0.0;
  for (const auto& w : m.w) s += dot(w.a, w.a);
  for (const auto& b : m.b) s += dot(b, b);
  return s;
}

void init_uniform_xavier(Mlp& m, Rng& rng, bool zero_last) {
  const int L = m.n_layers();
  for (int l = 0; l < L; ++l) {
    Mat& w = m.w[l];
    if (zero_last && l == L - 1) {
      std::fill(w.a.begin(), w.a.end(), 0.0);
      std::fill(m.b[l].begin(), m.b[l].end(), 0.0);
      continue;
    }
    const double s = std::sqrt(6.0 / static_cast<double>(w.cols + w.rows));
    for (auto& x : w.a) x = (2.0 * rng.uniform() - 1.0) * s;
    std::fill(m.b[l].begin(), m.b[l].end(), 0.0);
  }
}

}  // namespace discflow::numcore
