#include "discflow/train/fit.hpp"

#include "discflow/numcore/adam.hpp"
#include "discflow/numcore/rng.hpp"

namespace discflow::train {

void TrainConfig::validate() const {
  if (iterations < 0 || batch_size <= 0 || !(learning_rate > 0.0) || checkpoint_every <= 0 ||
      blocks <= 0) {
    throw ConfigError("TrainConfig: all sizes and rates must be positive");
  }
}

namespace {

std::vector<numcore::Mlp*> trainable(FlowStack& tphi, DequantFlow& tlambda) {
  std::vector<numcore::Mlp*> params;
  for (auto& layer : tphi.layers) {
    if (auto* c = std::get_if<flows::CouplingLayer>(&layer)) params.push_back(&c->conditioner());
  }
  for (auto& layer : tlambda.layers) params.push_back(&layer.conditioner());
  return params;
}

}  // namespace

TrainTrace fit(FlowStack& tphi, DequantFlow& tlambda, const DiscreteTarget& target,
               const TrainConfig& cfg) {
  cfg.validate();
  LatentDensity density(tphi, tlambda, target);
  numcore::Rng rng(cfg.seed);

  auto params = trainable(tphi, tlambda);
  const std::size_t n_phi = static_cast<std::size_t>(tphi.n_coupling());
  std::vector<numcore::AdamState> opt;
  opt.reserve(params.size());
  for (auto* p : params) opt.push_back(numcore::AdamState::make(*p, cfg.learning_rate));

  std::vector<numcore::Mlp> snapshot;
  auto take_snapshot = [&] {
    snapshot.clear();
    for (auto* p : params) snapshot.push_back(*p);
  };
  take_snapshot();

  ObjectiveOptions oopts;
  oopts.straight_through = cfg.straight_through;
  oopts.blocks = cfg.blocks;
  oopts.threads = cfg.threads;

  TrainTrace trace;
  trace.objective.reserve(cfg.iterations);

  std::vector<Vec> batch(cfg.batch_size);
  const int d = tphi.dim;
  for (long it = 0; it < cfg.iterations; ++it) {
    for (auto& z : batch) z = rng.normal_vec(d);
    ObjectiveResult res;
    try {
      res = objective_and_grads(density, batch, oopts);
    } catch (const NumericError&) {
      // Roll back to the last checkpoint and stop.
      for (std::size_t i = 0; i < params.size(); ++i) *params[i] = snapshot[i];
      trace.diverged = true;
      break;
    }
    // Ascent: Adam minimizes, so feed the negated gradients.
    scale_grads(res.grads, -1.0);
    for (std::size_t i = 0; i < res.grads.phi.size(); ++i) {
      adam_step(*params[i], res.grads.phi[i], opt[i]);
    }
    for (std::size_t i = 0; i < res.grads.lambda.size(); ++i) {
      adam_step(*params[n_phi + i], res.grads.lambda[i], opt[n_phi + i]);
    }
    trace.objective.push_back(res.value);
    trace.ood_rate.push_back(res.ood_rate);
    trace.grad_norm.push_back(res.grad_norm);
    trace.iterations_run = it + 1;
    if ((it + 1) % cfg.checkpoint_every == 0) take_snapshot();
  }
  return trace;
}

}  // namespace discflow::train
