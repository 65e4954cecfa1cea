#include "discflow/train/latent_density.hpp"

#include <cmath>

#include "discflow/flows/layers.hpp"

namespace discflow::train {

LatentDensity::LatentDensity(const FlowStack& phi, const DequantFlow& lambda,
                             const DiscreteTarget& pi)
    : tphi(&phi), tlambda(&lambda), target(&pi) {
  if (phi.dim != lambda.dim || phi.dim != pi.dim()) {
    throw DimensionError("LatentDensity: dimension mismatch between flows and target");
  }
  if (lambda.levels != pi.levels()) {
    throw DimensionError("LatentDensity: grid levels mismatch between dequantizer and target");
  }
}

namespace {

// theta from clamped floor; u from the true fractional part, pulled into the
// box interior. sat[i] is set where the interior clamp bound.
struct BoxSplit {
  std::vector<int> theta;
  Vec u;
  std::vector<std::uint8_t> sat;
  bool out_of_domain = false;
};

BoxSplit split_box(const Vec& x, int levels) {
  BoxSplit s;
  const auto r = flows::round_forward(x, levels);
  s.theta = r.theta;
  s.out_of_domain = r.out_of_domain;
  s.u.resize(x.size());
  s.sat.assign(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double u = x[i] - std::floor(x[i]);
    if (u < flows::kBoxDelta) {
      u = flows::kBoxDelta;
      s.sat[i] = 1;
    } else if (u > 1.0 - flows::kBoxDelta) {
      u = 1.0 - flows::kBoxDelta;
      s.sat[i] = 1;
    }
    // Out-of-domain coordinates sit at the nearest box face of the clamped
    // cell; the dequantizer then assigns them vanishing density.
    const double f = std::floor(x[i]);
    if (f < 0.0) {
      u = flows::kBoxDelta;
      s.sat[i] = 1;
    } else if (f >= static_cast<double>(levels)) {
      u = 1.0 - flows::kBoxDelta;
      s.sat[i] = 1;
    }
    s.u[i] = u;
  }
  return s;
}

}  // namespace

LatentEval latent_logdensity(const LatentDensity& l, const Vec& z) {
  auto [x, logdet_phi] = stack_forward(*l.tphi, z);
  BoxSplit s = split_box(x, l.target->levels());
  const auto q = l.tlambda->logq(s.theta, s.u);
  LatentEval ev;
  ev.logp = l.target->log_prob_unnorm(s.theta) + q.logq + logdet_phi;
  ev.theta = std::move(s.theta);
  ev.out_of_domain = s.out_of_domain;
  return ev;
}

LatentEval latent_logdensity_grad(const LatentDensity& l, const Vec& z, Vec& grad_z) {
  flows::StackCache sc;
  Vec x = z;
  const double logdet_phi = stack_forward_cached(*l.tphi, x, sc);
  BoxSplit s = split_box(x, l.target->levels());

  DequantFlow::InvCache dc;
  const double logq = l.tlambda->logq_cached(s.theta, s.u, dc);

  LatentEval ev;
  ev.logp = l.target->log_prob_unnorm(s.theta) + logq + logdet_phi;
  ev.theta = s.theta;
  ev.out_of_domain = s.out_of_domain;

  std::vector<flows::Mlp> lam_scratch;
  lam_scratch.reserve(l.tlambda->layers.size());
  for (const auto& layer : l.tlambda->layers) {
    lam_scratch.push_back(numcore::zeros_like(layer.conditioner()));
  }
  Vec gx = l.tlambda->logq_backward(dc, 1.0, lam_scratch);
  for (std::size_t i = 0; i < gx.size(); ++i) {
    if (s.sat[i]) gx[i] = 0.0;  // clamp saturated: a.e. derivative is zero
  }
  std::vector<flows::Mlp> phi_scratch;
  phi_scratch.reserve(static_cast<std::size_t>(l.tphi->n_coupling()));
  for (const auto& layer : l.tphi->layers) {
    if (const auto* c = std::get_if<flows::CouplingLayer>(&layer)) {
      phi_scratch.push_back(numcore::zeros_like(c->conditioner()));
    }
  }
  stack_forward_backward(*l.tphi, sc, gx, 1.0, phi_scratch);
  grad_z = std::move(gx);
  return ev;
}

}  // namespace discflow::train
