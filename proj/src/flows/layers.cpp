#include "discflow/flows/layers.hpp"

#include <cmath>

namespace discflow::flows {

namespace {

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double sigmoid_layer(const Vec& v, Vec& u, double delta) {
  u.resize(v.size());
  double logdet = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw NumericError("sigmoid_layer: non-finite input");
    u[i] = std::clamp(sigmoid(v[i]), delta, 1.0 - delta);
    // log sigmoid'(v) = log s(v) + log(1 - s(v)) = -softplus(-v) - softplus(v)
    logdet += -softplus(-v[i]) - softplus(v[i]);
  }
  return logdet;
}

double logit_layer(const Vec& u, Vec& v) {
  v.resize(u.size());
  double logdet = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0) || !(u[i] < 1.0)) {
      throw DomainError("logit_layer: input outside (0, 1)");
    }
    v[i] = std::log(u[i]) - std::log1p(-u[i]);
    logdet += -std::log(u[i]) - std::log1p(-u[i]);
  }
  return logdet;
}

void sigmoid_backward(const Vec& v, const Vec& gu, double gl, Vec& gv) {
  gv.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = sigmoid(v[i]);
    gv[i] = gu[i] * s * (1.0 - s) + gl * (1.0 - 2.0 * s);
  }
}

void logit_backward(const Vec& u, const Vec& gv, double gl_inv, Vec& gu) {
  gu.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = u[i] * (1.0 - u[i]);
    gu[i] = gv[i] / w + gl_inv * (2.0 * u[i] - 1.0) / w;
  }
}

}  // namespace discflow::flows
