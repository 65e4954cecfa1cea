#include "discflow/train/objective.hpp"

#include <cmath>
#include <sstream>

#include "discflow/flows/layers.hpp"
#include "discflow/numcore/parallel.hpp"

namespace discflow::train {

FlowGrads zero_grads(const FlowStack& tphi, const DequantFlow& tlambda) {
  FlowGrads g;
  for (const auto& layer : tphi.layers) {
    if (const auto* c = std::get_if<flows::CouplingLayer>(&layer)) {
      g.phi.push_back(numcore::zeros_like(c->conditioner()));
    }
  }
  for (const auto& layer : tlambda.layers) {
    g.lambda.push_back(numcore::zeros_like(layer.conditioner()));
  }
  return g;
}

void add_grads(FlowGrads& dst, const FlowGrads& src) {
  for (std::size_t i = 0; i < dst.phi.size(); ++i) numcore::add_scaled(dst.phi[i], src.phi[i], 1.0);
  for (std::size_t i = 0; i < dst.lambda.size(); ++i) {
    numcore::add_scaled(dst.lambda[i], src.lambda[i], 1.0);
  }
}

void scale_grads(FlowGrads& g, double alpha) {
  for (auto& m : g.phi) {
    for (auto& w : m.w)
      for (auto& v : w.a) v *= alpha;
    for (auto& b : m.b)
      for (auto& v : b) v *= alpha;
  }
  for (auto& m : g.lambda) {
    for (auto& w : m.w)
      for (auto& v : w.a) v *= alpha;
    for (auto& b : m.b)
      for (auto& v : b) v *= alpha;
  }
}

double grads_norm(const FlowGrads& g) {
  double s = 0.0;
  for (const auto& m : g.phi) s += numcore::grad_sq_norm(m);
  for (const auto& m : g.lambda) s += numcore::grad_sq_norm(m);
  return std::sqrt(s);
}

namespace {

// Discrete central difference of log pi along coordinate j, clamped at the
// grid edges; the straight-through surrogate gradient.
double st_logpi_grad(const DiscreteTarget& target, std::span<const int> theta, int j) {
  const int k = target.levels();
  const int lo = std::max(theta[j] - 1, 0);
  const int hi = std::min(theta[j] + 1, k - 1);
  if (hi == lo) return 0.0;
  const double up = target.log_prob_delta(theta, j, hi);
  const double dn = target.log_prob_delta(theta, j, lo);
  return (up - dn) / static_cast<double>(hi - lo);
}

struct SampleOutcome {
  double logp = 0.0;
  bool ood = false;
};

// Single-sample forward/backward; accumulates ascent gradients into grads.
SampleOutcome accumulate_sample(const LatentDensity& l, const Vec& z, bool straight_through,
                                FlowGrads& grads) {
  flows::StackCache sc;
  Vec x = z;
  const double logdet_phi = stack_forward_cached(*l.tphi, x, sc);

  const int levels = l.target->levels();
  const auto rounded = flows::round_forward(x, levels);
  Vec u(x.size());
  std::vector<std::uint8_t> sat(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = std::floor(x[i]);
    double ui = x[i] - f;
    if (ui < flows::kBoxDelta || f < 0.0) {
      ui = flows::kBoxDelta;
      sat[i] = 1;
    } else if (ui > 1.0 - flows::kBoxDelta || f >= static_cast<double>(levels)) {
      ui = 1.0 - flows::kBoxDelta;
      sat[i] = 1;
    }
    u[i] = ui;
  }

  DequantFlow::InvCache dc;
  const double logq = l.tlambda->logq_cached(rounded.theta, u, dc);
  const double logpi = l.target->log_prob_unnorm(rounded.theta);

  SampleOutcome out;
  out.logp = logpi + logq + logdet_phi;
  out.ood = rounded.out_of_domain;

  Vec gx = l.tlambda->logq_backward(dc, 1.0, grads.lambda);
  for (std::size_t i = 0; i < gx.size(); ++i) {
    if (sat[i]) gx[i] = 0.0;
  }
  if (straight_through) {
    for (std::size_t i = 0; i < gx.size(); ++i) {
      gx[i] += st_logpi_grad(*l.target, rounded.theta, static_cast<int>(i));
    }
  }
  stack_forward_backward(*l.tphi, sc, gx, 1.0, grads.phi);
  return out;
}

}  // namespace

ObjectiveResult objective_and_grads(const LatentDensity& l, const std::vector<Vec>& z_batch,
                                    const ObjectiveOptions& opts) {
  const int n = static_cast<int>(z_batch.size());
  if (n == 0) throw DimensionError("objective_and_grads: empty batch");
  const int blocks = std::max(1, std::min(opts.blocks, n));

  struct BlockAcc {
    FlowGrads grads;
    double sum = 0.0;
    int ood = 0;
    int bad = -1;  // index of a non-finite sample, if any
  };
  std::vector<BlockAcc> acc(blocks);
  for (auto& a : acc) a.grads = zero_grads(*l.tphi, *l.tlambda);

  numcore::parallel_blocks(blocks, opts.threads, [&](int b) {
    const int begin = static_cast<int>(static_cast<long>(n) * b / blocks);
    const int end = static_cast<int>(static_cast<long>(n) * (b + 1) / blocks);
    for (int i = begin; i < end; ++i) {
      const auto out = accumulate_sample(l, z_batch[i], opts.straight_through, acc[b].grads);
      if (!std::isfinite(out.logp)) {
        acc[b].bad = i;
        return;
      }
      acc[b].sum += out.logp;
      if (out.ood) ++acc[b].ood;
    }
  });

  for (const auto& a : acc) {
    if (a.bad >= 0) {
      std::ostringstream ss;
      ss << "objective_and_grads: non-finite objective at z = [";
      for (std::size_t j = 0; j < z_batch[a.bad].size(); ++j) {
        if (j) ss << ", ";
        ss << z_batch[a.bad][j];
      }
      ss << "]";
      throw NumericError(ss.str());
    }
  }

  ObjectiveResult res;
  res.grads = zero_grads(*l.tphi, *l.tlambda);
  double sum = 0.0;
  int ood = 0;
  for (const auto& a : acc) {  // fixed block order keeps the reduction deterministic
    sum += a.sum;
    ood += a.ood;
    add_grads(res.grads, a.grads);
  }
  scale_grads(res.grads, 1.0 / static_cast<double>(n));
  res.value = sum / static_cast<double>(n);
  res.ood_rate = static_cast<double>(ood) / static_cast<double>(n);
  res.grad_norm = grads_norm(res.grads);
  return res;
}

}  // namespace discflow::train
