#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "discflow/samplers/discrete.hpp"
#include "discflow/samplers/hmc.hpp"
#include "discflow/samplers/latent_mh.hpp"
#include "discflow/samplers/push.hpp"
#include "discflow/targets/ising.hpp"
#include "support/flow_helpers.hpp"
#include "support/oracles.hpp"

using namespace discflow;
using namespace discflow::samplers;
using flow_helpers::bare_sigmoid_dequant;
using numcore::Rng;
using numcore::Vec;
using targets::TableTarget;
using targets::UniformTarget;

namespace {

// Exact standard normal in latent space, for kernel-level oracles.
class StdNormalTarget final : public LatentLogDensity {
 public:
  explicit StdNormalTarget(int dim) : dim_(dim) {}
  train::LatentEval eval(const Vec& z) const override {
    train::LatentEval ev;
    ev.logp = flows::log_std_normal(z);
    ev.theta.assign(dim_, 0);
    return ev;
  }
  int dim() const override { return dim_; }

 private:
  int dim_;
};

class QuadraticGradTarget final : public GradTarget {
 public:
  double logp(const Vec& z) const override { return -0.5 * numcore::dot(z, z); }
  double logp_grad(const Vec& z, Vec& grad) const override {
    grad.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) grad[i] = -z[i];
    return logp(z);
  }
};

flows::FlowStack empty_stack(int dim) {
  flows::FlowStack f;
  f.dim = dim;
  return f;
}

double tv_against(const std::vector<double>& probs, const std::vector<long>& counts) {
  long total = 0;
  for (long c : counts) total += c;
  double tv = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    tv += std::fabs(static_cast<double>(counts[i]) / total - probs[i]);
  }
  return 0.5 * tv;
}

}  // namespace

TEST_CASE("mh step: equal log-density proposals are always accepted") {
  StdNormalTarget target(1);
  LatentChain chain({0.7}, 5);
  chain.logp = target.eval(chain.z).logp;
  // sigma 0 makes the proposal identical to the current state.
  for (int i = 0; i < 50; ++i) CHECK(mh_latent_step(chain, target, 0.0));
  CHECK(chain.accepted == 50);
  CHECK(chain.proposed == 50);
  CHECK(chain.z[0] == 0.7);
}

TEST_CASE("mh kernel: standard-normal latent target calibration") {
  StdNormalTarget target(1);
  LatentRunOptions opts;
  opts.n_chains = 8;
  opts.n_steps = 125000;
  opts.thin = 10;
  opts.sigma_prop = 1.0;
  opts.seed = 99;
  opts.threads = 4;
  const auto run = run_latent_mh(target, opts);
  REQUIRE(run.n_kept == 12500);
  double mean = 0.0, sq = 0.0;
  const long n = static_cast<long>(run.n_chains) * run.n_kept;
  for (long i = 0; i < n; ++i) {
    mean += run.z[i];
    sq += run.z[i] * run.z[i];
  }
  mean /= n;
  sq /= n;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs((sq - mean * mean) - 1.0) < 0.05);
}

TEST_CASE("run_latent_mh: sample counts, determinism, chain isolation") {
  StdNormalTarget target(2);
  LatentRunOptions opts;
  opts.n_chains = 4;
  opts.n_steps = 30;
  opts.thin = 30;
  opts.sigma_prop = 0.5;
  opts.seed = 123;
  const auto one = run_latent_mh(target, opts);
  CHECK(one.n_kept == 1);  // n_steps == thin -> one kept sample per chain

  opts.n_steps = 100;
  opts.thin = 7;
  const auto a = run_latent_mh(target, opts);
  CHECK(a.n_kept == 100 / 7);
  const auto b = run_latent_mh(target, opts);
  CHECK(a.z == b.z);  // bitwise determinism
  CHECK(a.proposed == static_cast<long>(opts.n_chains) * opts.n_steps);
  CHECK(a.accepted <= a.proposed);

  // Reproduce chain 2 in isolation from its own seeds; other chains'
  // streams cannot influence it.
  Rng init(chain_init_seed(opts.seed, 2));
  Vec z0{init.normal(), init.normal()};
  LatentChain chain(z0, chain_walk_seed(opts.seed, 2));
  chain.logp = target.eval(chain.z).logp;
  long kept = 0;
  for (long s = 1; s <= opts.n_steps; ++s) {
    mh_latent_step(chain, target, opts.sigma_prop);
    if (s % opts.thin == 0 && kept < a.n_kept) {
      const double* want = a.sample(2, kept);
      CHECK(want[0] == chain.z[0]);
      CHECK(want[1] == chain.z[1]);
      ++kept;
    }
  }
}

TEST_CASE("latent MH with identity flows on uniform pi pushes to a uniform histogram") {
  const auto tphi = empty_stack(1);
  const auto tlam = bare_sigmoid_dequant(1, 8);
  const UniformTarget pi(1, 8);
  const train::LatentDensity density(tphi, tlam, pi);

  LatentRunOptions opts;
  opts.n_chains = 16;
  opts.n_steps = 20000;
  opts.thin = 10;
  opts.sigma_prop = 1.0;
  opts.seed = 31;
  opts.threads = 4;
  const auto run = run_latent_mh(density, opts);
  const auto theta = push_samples(tphi, run, 8);

  std::vector<long> counts(8, 0);
  for (int v : theta) counts[v]++;
  CHECK(tv_against(std::vector<double>(8, 0.125), counts) < 0.05);
}

TEST_CASE("push_samples: floors the transported latent samples") {
  const auto tphi = empty_stack(1);
  LatentRunResult run;
  run.n_chains = 1;
  run.n_kept = 3;
  run.dim = 1;
  run.z = {2.3, 0.9, 7.99};
  long ood = 0;
  const auto theta = push_samples(tphi, run, 8, &ood);
  CHECK(theta == std::vector<int>{2, 0, 7});
  CHECK(ood == 0);

  run.z = {-0.4, 9.2, 3.3};
  const auto clamped = push_samples(tphi, run, 8, &ood);
  CHECK(clamped == std::vector<int>{0, 7, 3});
  CHECK(ood == 2);

  SUBCASE("agrees with the latent density's internal cell assignment") {
    const auto tlam = bare_sigmoid_dequant(1, 8);
    const UniformTarget pi(1, 8);
    const train::LatentDensity density(tphi, tlam, pi);
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
      const Vec z{8.0 * rng.uniform()};
      LatentRunResult single;
      single.n_chains = 1;
      single.n_kept = 1;
      single.dim = 1;
      single.z = z;
      const auto via_push = push_samples(tphi, single, 8);
      const auto via_density = train::latent_logdensity(density, z);
      CHECK(via_push[0] == via_density.theta[0]);
    }
  }
}

TEST_CASE("gibbs: independent-coordinate target is sampled exactly in one sweep") {
  // Product target over 2 coordinates, K = 4.
  std::vector<double> lm(16);
  const double m0[4] = {0.0, -1.0, -2.0, -0.5};
  const double m1[4] = {-0.3, 0.0, -1.5, -2.5};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) lm[a * 4 + b] = m0[a] + m1[b];
  }
  const TableTarget pi(2, 4, lm);

  // Exact marginals.
  auto marginal = [&](const double* lw) {
    std::vector<double> p(4);
    double z = 0.0;
    for (int i = 0; i < 4; ++i) {
      p[i] = std::exp(lw[i]);
      z += p[i];
    }
    for (auto& v : p) v /= z;
    return p;
  };
  const auto p0 = marginal(m0);
  const auto p1 = marginal(m1);

  DiscreteChain chain({0, 0}, 17);
  std::vector<long> c0(4, 0), c1(4, 0);
  const long sweeps = 20000;
  for (long s = 0; s < sweeps; ++s) {
    chain.theta = {0, 0};  // fresh start: one sweep must produce an exact draw
    gibbs_sweep(pi, chain);
    c0[chain.theta[0]]++;
    c1[chain.theta[1]]++;
  }
  CHECK(tv_against(p0, c0) < 0.02);
  CHECK(tv_against(p1, c1) < 0.02);
}

TEST_CASE("gibbs: 3x3 ising center marginal matches 2^9 enumeration") {
  targets::IsingDenoise ising(3, 3, 0.4, 0.0, std::vector<int>(9, 1));

  // Exhaustive enumeration oracle.
  double z = 0.0, center_on = 0.0;
  oracles::for_each_grid_point(9, 2, [&](const std::vector<int>& theta) {
    const double w = std::exp(ising.log_prob_unnorm(theta));
    z += w;
    if (theta[4] == 1) center_on += w;
  });
  const double exact = center_on / z;
  CHECK(exact == doctest::Approx(0.5).epsilon(1e-9));  // eta = 0 symmetry

  DiscreteChain chain(std::vector<int>(9, 0), 23);
  long on = 0;
  const long sweeps = 30000;
  for (long s = 0; s < sweeps; ++s) {
    gibbs_sweep(ising, chain);
    on += chain.theta[4];
  }
  CHECK(std::fabs(static_cast<double>(on) / sweeps - exact) < 0.01);
}

TEST_CASE("gibbs and discrete MH: K = 1 grid leaves the state unchanged") {
  const UniformTarget pi(3, 1);
  DiscreteChain chain({0, 0, 0}, 3);
  gibbs_sweep(pi, chain);
  CHECK(chain.theta == std::vector<int>{0, 0, 0});
  CHECK(discrete_mh_step(pi, chain));  // proposal equals the state: accepted
  CHECK(chain.theta == std::vector<int>{0, 0, 0});
}

TEST_CASE("discrete MH: uniform target accepts every proposal") {
  const UniformTarget pi(4, 3);
  DiscreteChain chain({0, 1, 2, 0}, 29);
  for (int s = 0; s < 200; ++s) discrete_mh_step(pi, chain);
  CHECK(chain.accepted == chain.proposed);
  CHECK(chain.proposed == 200);
}

TEST_CASE("discrete MH: 1-d K = 4 histogram approaches the exact masses") {
  const std::vector<double> lm{0.0, -0.7, -1.9, -0.2};
  const TableTarget pi(1, 4, lm);
  std::vector<double> probs(4);
  double z = 0.0;
  for (int i = 0; i < 4; ++i) {
    probs[i] = std::exp(lm[i]);
    z += probs[i];
  }
  for (auto& p : probs) p /= z;

  DiscreteRunOptions opts;
  opts.kind = BaselineKind::kDiscreteMh;
  opts.n_chains = 4;
  opts.n_steps = 50000;
  opts.thin = 1;
  opts.burn_in = 1000;
  opts.seed = 37;
  opts.threads = 4;
  const auto run = run_discrete_baseline(pi, opts);
  std::vector<long> counts(4, 0);
  for (int v : run.theta) counts[v]++;
  CHECK(tv_against(probs, counts) < 0.03);
}

TEST_CASE("run_discrete_baseline: burn-in excluded, determinism, shape") {
  const UniformTarget pi(2, 3);
  DiscreteRunOptions opts;
  opts.kind = BaselineKind::kGibbs;
  opts.n_chains = 3;
  opts.n_steps = 40;
  opts.thin = 10;
  opts.burn_in = 25;
  opts.seed = 41;
  const auto a = run_discrete_baseline(pi, opts);
  CHECK(a.n_kept == 4);
  CHECK(static_cast<long>(a.theta.size()) == 3L * 4 * 2);
  const auto b = run_discrete_baseline(pi, opts);
  CHECK(a.theta == b.theta);
}

TEST_CASE("hmc: zero leapfrog steps is an accepted identity proposal") {
  QuadraticGradTarget target;
  Rng rng(43);
  Vec z{1.0, -0.5};
  double logp = target.logp(z);
  for (int i = 0; i < 20; ++i) {
    CHECK(hmc_latent_step(target, z, logp, rng, 0.1, 0));
  }
  CHECK(z[0] == 1.0);
  CHECK(z[1] == -0.5);
}

TEST_CASE("hmc: leapfrog energy error shrinks at second order") {
  QuadraticGradTarget target;
  // Same momentum draw for both trajectories.
  double err_coarse = 0.0, err_fine = 0.0;
  {
    Rng rng(47);
    Vec z{1.2, -0.8};
    double logp = target.logp(z);
    hmc_latent_step(target, z, logp, rng, 0.2, 10, &err_coarse);
  }
  {
    Rng rng(47);
    Vec z{1.2, -0.8};
    double logp = target.logp(z);
    hmc_latent_step(target, z, logp, rng, 0.1, 20, &err_fine);
  }
  CHECK(err_fine > 0.0);
  CHECK(err_coarse / err_fine >= 3.5);
}

TEST_CASE("hmc: flow-backed latent target samples a gaussian-like pullback") {
  // Identity flows + uniform target: the continuous part of log p~ is smooth
  // inside each cell; HMC should hold a healthy acceptance rate.
  const auto tphi = empty_stack(1);
  const auto tlam = bare_sigmoid_dequant(1, 8);
  const UniformTarget pi(1, 8);
  const train::LatentDensity density(tphi, tlam, pi);
  HmcRunOptions opts;
  opts.n_chains = 4;
  opts.n_steps = 2000;
  opts.thin = 5;
  opts.step_size = 0.1;
  opts.n_leapfrog = 5;
  opts.seed = 53;
  const auto run = run_latent_hmc(density, opts);
  CHECK(run.n_kept == 400);
  CHECK(run.acceptance_rate() > 0.5);
}
