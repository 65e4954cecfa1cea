#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "discflow/flows/checkpoint.hpp"
#include "discflow/flows/dequant.hpp"
#include "discflow/flows/layers.hpp"
#include "discflow/flows/rounding.hpp"
#include "discflow/flows/stack.hpp"
#include "support/flow_helpers.hpp"
#include "support/oracles.hpp"

using namespace discflow;
using namespace discflow::flows;
using flow_helpers::bare_sigmoid_dequant;
using flow_helpers::forced_coupling;
using flow_helpers::random_coupling;
using flow_helpers::random_dequant;
using flow_helpers::random_stack;
using numcore::Rng;
using numcore::Vec;

namespace {
const double kLn2 = std::log(2.0);
}

TEST_CASE("coupling: zero-initialized conditioner is the identity") {
  Rng rng(1);
  CouplingLayer layer(parity_mask(4, true), 0, 16, 2, 5.0, rng);  // zero_last init
  Vec v{0.3, -1.0, 2.0, 0.7};
  const Vec orig = v;
  const double logdet = layer.forward(v, {});
  CHECK(logdet == 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == orig[i]);
}

TEST_CASE("coupling: forced scale ln 2 doubles the transformed half") {
  auto layer = forced_coupling(parity_mask(4, true), 0, kLn2, 0.0);
  Vec v{1.0, 2.0, 3.0, 4.0};
  const double logdet = layer.forward(v, {});
  CHECK(logdet == doctest::Approx(2.0 * kLn2).epsilon(1e-12));
  CHECK(v[0] == 1.0);
  CHECK(v[1] == doctest::Approx(4.0));
  CHECK(v[2] == 3.0);
  CHECK(v[3] == doctest::Approx(8.0));

  SUBCASE("inverse halves and negates the log-det") {
    Vec x{1.0, 4.0, 3.0, 8.0};
    const double inv_logdet = layer.inverse(x, {});
    CHECK(inv_logdet == doctest::Approx(-2.0 * kLn2).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK(x[3] == doctest::Approx(4.0));
  }
}

TEST_CASE("coupling: analytic log-det matches the numeric Jacobian (d = 3)") {
  Rng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    auto layer = random_coupling(parity_mask(3, rep % 2 == 0), 0, rng);
    Vec z{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    Vec v = z;
    const double logdet = layer.forward(v, {});
    const double numeric = oracles::numeric_log_abs_det(
        [&](const Vec& in) {
          Vec t = in;
          layer.forward(t, {});
          return t;
        },
        z, 1e-6);
    CHECK(std::fabs(logdet - numeric) < 1e-4);
  }
}

TEST_CASE("coupling: inverse(forward(z)) = z within 1e-6") {
  Rng rng(19);
  for (int rep = 0; rep < 20; ++rep) {
    auto layer = random_coupling(parity_mask(5, rep % 2 == 0), 0, rng);
    Vec z(5);
    for (auto& x : z) x = 4.0 * rng.uniform() - 2.0;
    Vec v = z;
    const double fwd = layer.forward(v, {});
    const double inv = layer.inverse(v, {});
    CHECK(fwd + inv == doctest::Approx(0.0).epsilon(1e-10));
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::fabs(v[i] - z[i]) < 1e-6);
  }
}

TEST_CASE("coupling gradients match finite differences") {
  Rng rng(23);
  const double h = 1e-5;
  for (int rep = 0; rep < 8; ++rep) {
    auto layer = random_coupling(parity_mask(4, rep % 2 == 0), 0, rng);
    Vec z(4), gx(4);
    for (auto& v : z) v = 4.0 * rng.uniform() - 2.0;
    for (auto& v : gx) v = 2.0 * rng.uniform() - 1.0;
    const double gl = 2.0 * rng.uniform() - 1.0;

    // loss = gx . forward(z) + gl * logdet(z)
    auto loss_at = [&](const Vec& in) {
      Vec t = in;
      const double ld = layer.forward(t, {});
      return numcore::dot(gx, t) + gl * ld;
    };

    CouplingLayer::Cache cache;
    Vec v = z;
    layer.forward_cached(v, {}, cache);
    Vec g = gx;
    numcore::Mlp grads = numcore::zeros_like(layer.conditioner());
    layer.forward_backward(cache, g, gl, grads);

    for (std::size_t i = 0; i < z.size(); ++i) {
      const double fd = oracles::central_diff(loss_at, z, i, h);
      CHECK(oracles::rel_err(fd, g[i]) < 1e-4);
    }
    auto param_loss = [&] {
      Vec t = z;
      const double ld = layer.forward(t, {});
      return numcore::dot(gx, t) + gl * ld;
    };
    numcore::Mlp& cond = layer.conditioner();
    for (int l = 0; l < cond.n_layers(); ++l) {
      for (std::size_t s = 0; s < cond.w[l].a.size(); s += 5) {
        const double fd = oracles::central_diff_param(param_loss, cond.w[l].a[s], h);
        CHECK(oracles::rel_err(fd, grads.w[l].a[s]) < 1e-4);
      }
    }
  }
}

TEST_CASE("coupling inverse gradients match finite differences") {
  Rng rng(29);
  const double h = 1e-5;
  for (int rep = 0; rep < 8; ++rep) {
    auto layer = random_coupling(parity_mask(4, rep % 2 == 0), 0, rng);
    Vec x(4), gz(4);
    for (auto& v : x) v = 4.0 * rng.uniform() - 2.0;
    for (auto& v : gz) v = 2.0 * rng.uniform() - 1.0;
    const double gl = 2.0 * rng.uniform() - 1.0;

    auto loss_at = [&](const Vec& in) {
      Vec t = in;
      const double ld = layer.inverse(t, {});
      return numcore::dot(gz, t) + gl * ld;
    };

    CouplingLayer::Cache cache;
    Vec v = x;
    layer.inverse_cached(v, {}, cache);
    Vec g = gz;
    numcore::Mlp grads = numcore::zeros_like(layer.conditioner());
    layer.inverse_backward(cache, g, gl, grads);

    for (std::size_t i = 0; i < x.size(); ++i) {
      const double fd = oracles::central_diff(loss_at, x, i, h);
      CHECK(oracles::rel_err(fd, g[i]) < 1e-4);
    }
    auto param_loss = [&] {
      Vec t = x;
      const double ld = layer.inverse(t, {});
      return numcore::dot(gz, t) + gl * ld;
    };
    numcore::Mlp& cond = layer.conditioner();
    for (std::size_t s = 0; s < cond.w[0].a.size(); s += 4) {
      const double fd = oracles::central_diff_param(param_loss, cond.w[0].a[s], h);
      CHECK(oracles::rel_err(fd, grads.w[0].a[s]) < 1e-4);
    }
  }
}

TEST_CASE("stack: empty stack is the identity with zero log-det") {
  FlowStack f;
  f.dim = 3;
  const Vec z{1.0, -2.0, 0.5};
  const auto [x, logdet] = stack_forward(f, z);
  CHECK(logdet == 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(x[i] == z[i]);
}

TEST_CASE("stack: two forced-scale layers with alternating masks double everything") {
  FlowStack f;
  f.dim = 4;
  f.layers.emplace_back(forced_coupling(parity_mask(4, true), 0, kLn2, 0.0));
  f.layers.emplace_back(forced_coupling(parity_mask(4, false), 0, kLn2, 0.0));
  const Vec z{1.0, 1.0, 2.0, 2.0};
  const auto [x, logdet] = stack_forward(f, z);
  CHECK(logdet == doctest::Approx(4.0 * kLn2));
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(x[i] == doctest::Approx(2.0 * z[i]));
}

TEST_CASE("stack: composed log-det matches the numeric Jacobian (d = 3)") {
  Rng rng(31);
  for (int rep = 0; rep < 6; ++rep) {
    const FlowStack f = random_stack(3, 4, rng);
    Vec z(3);
    for (auto& v : z) v = 2.0 * rng.uniform() - 1.0;
    const auto [x, logdet] = stack_forward(f, z);
    const double numeric = oracles::numeric_log_abs_det(
        [&](const Vec& in) { return stack_forward(f, in).first; }, z, 1e-6);
    CHECK(std::fabs(logdet - numeric) < 1e-4);
  }
}

TEST_CASE("stack round trip and log-det antisymmetry over d = 2..16") {
  Rng rng(37);
  for (int d = 2; d <= 16; d += 2) {
    const FlowStack f = random_stack(d, 6, rng);
    for (int rep = 0; rep < 5; ++rep) {
      Vec z(d);
      for (auto& v : z) v = 4.0 * rng.uniform() - 2.0;
      const auto [x, ld_fwd] = stack_forward(f, z);
      const auto [back, ld_inv] = stack_inverse(f, x);
      CHECK(std::fabs(ld_fwd + ld_inv) < 1e-8);
      double err = 0.0;
      for (int i = 0; i < d; ++i) err = std::max(err, std::fabs(back[i] - z[i]));
      CHECK(err < 1e-6);
    }
  }
}

TEST_CASE("stack: range map layer places the latent bulk in the box") {
  Rng rng(41);
  RangeMap rm;
  rm.lo = {0.0, 0.0};
  rm.hi = {8.0, 8.0};
  rm.extent = 3.0;
  const FlowStack f = make_flow_stack(2, 4, 8, 1, 5.0, rng, rm);
  const auto [x, logdet] = stack_forward(f, {0.0, 0.0});
  CHECK(x[0] == doctest::Approx(4.0));  // identity couplings + affine midpoint
  CHECK(x[1] == doctest::Approx(4.0));
  CHECK(logdet == doctest::Approx(2.0 * std::log(8.0 / 6.0)));
  // One coordinate reversal sits between the two coupling pairs.
  const auto [lo, ld2] = stack_forward(f, {-3.0, 3.0});
  CHECK(lo[0] == doctest::Approx(8.0));
  CHECK(lo[1] == doctest::Approx(0.0));
}

TEST_CASE("sigmoid layer values and round trip") {
  Vec u;
  const double logdet1 = sigmoid_layer({0.0}, u);
  CHECK(u[0] == doctest::Approx(0.5));
  CHECK(logdet1 == doctest::Approx(std::log(0.25)).epsilon(1e-12));

  Vec u2;
  const double logdet2 = sigmoid_layer({0.0, 0.0}, u2);
  CHECK(logdet2 == doctest::Approx(2.0 * std::log(0.25)).epsilon(1e-12));

  Rng rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    const double v = 20.0 * rng.uniform() - 10.0;
    Vec s, back;
    const double lf = sigmoid_layer({v}, s);
    const double li = logit_layer(s, back);
    CHECK(std::fabs(back[0] - v) < 1e-9);
    CHECK(lf + li == doctest::Approx(0.0).epsilon(1e-9));
  }

  CHECK_THROWS_AS(logit_layer({0.0}, u), DomainError);
  CHECK_THROWS_AS(logit_layer({1.0}, u), DomainError);
  CHECK_THROWS_AS(logit_layer({-0.2}, u), DomainError);
}

TEST_CASE("dequant: bare sigmoid at eps = 0 in one dimension") {
  const auto f = bare_sigmoid_dequant(1, 4);
  const int theta[1] = {1};
  const auto [u, logq] = f.sample(theta, {0.0});
  CHECK(u[0] == doctest::Approx(0.5));
  // log N(0; 0, 1) - log 0.25 = -0.9189... + 1.3862... = 0.46735...
  CHECK(logq == doctest::Approx(0.4673558284).epsilon(1e-9));

  SUBCASE("identity-initialized coupling layers match the bare sigmoid") {
    Rng rng(47);
    const auto g = make_dequant_flow(1, 4, 4, 16, 2, 5.0, rng);
    const auto [u2, logq2] = g.sample(theta, {0.0});
    CHECK(u2[0] == doctest::Approx(0.5));
    CHECK(logq2 == doctest::Approx(logq).epsilon(1e-12));
  }

  SUBCASE("logq at u = 0.5 scales additively with dimension") {
    const auto g = bare_sigmoid_dequant(3, 4);
    const int th[3] = {0, 1, 2};
    const auto res = g.logq(th, {0.5, 0.5, 0.5});
    CHECK(res.logq == doctest::Approx(3.0 * 0.4673558284).epsilon(1e-9));
  }
}

TEST_CASE("dequant: sample and logq are consistent round trips") {
  Rng rng(53);
  const auto f = random_dequant(3, 8, 4, rng);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> theta{static_cast<int>(rng.uniform_int(8)),
                           static_cast<int>(rng.uniform_int(8)),
                           static_cast<int>(rng.uniform_int(8))};
    Vec eps(3);
    for (auto& v : eps) v = rng.normal();
    const auto [u, logq] = f.sample(theta, eps);
    for (double v : u) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
    const auto back = f.logq(theta, u);
    CHECK(back.logq == doctest::Approx(logq).epsilon(1e-7));
    for (int i = 0; i < 3; ++i) CHECK(back.eps[i] == doctest::Approx(eps[i]).epsilon(1e-7));
  }
}

TEST_CASE("dequant: boundary u raises a domain error") {
  const auto f = bare_sigmoid_dequant(2, 4);
  const int theta[2] = {0, 0};
  CHECK_THROWS_AS(f.logq(theta, {0.0, 0.5}), DomainError);
  CHECK_THROWS_AS(f.logq(theta, {0.5, 1.0}), DomainError);
}

TEST_CASE("dequant: Monte Carlo normalization of q(u|theta) is 1 within 2%") {
  Rng rng(59);
  auto check_normalization = [&](const DequantFlow& f, std::vector<int> theta) {
    Rng mc(101);
    const long n = 100000;
    double acc = 0.0;
    Vec u(f.dim);
    for (long i = 0; i < n; ++i) {
      for (auto& v : u) {
        v = mc.uniform();
        if (v <= 0.0) v = 0.5;
      }
      acc += std::exp(f.logq(theta, u).logq);
    }
    const double integral = acc / static_cast<double>(n);
    CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
  };

  check_normalization(bare_sigmoid_dequant(1, 4), {2});
  check_normalization(random_dequant(1, 4, 3, rng), {1});
  check_normalization(random_dequant(2, 8, 4, rng), {3, 6});
}

TEST_CASE("dequant gradients through logq match finite differences") {
  Rng rng(61);
  const auto f = random_dequant(2, 4, 3, rng);
  std::vector<int> theta{1, 2};
  Vec u{0.3, 0.7};

  DequantFlow::InvCache cache;
  f.logq_cached(theta, u, cache);
  std::vector<numcore::Mlp> grads;
  for (const auto& l : f.layers) grads.push_back(numcore::zeros_like(l.conditioner()));
  const Vec gu = f.logq_backward(cache, 1.0, grads);

  auto loss = [&](const Vec& uu) { return f.logq(theta, uu).logq; };
  const double h = 1e-6;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double fd = oracles::central_diff(loss, u, i, h);
    CHECK(oracles::rel_err(fd, gu[i]) < 1e-4);
  }
  // Parameter gradients (first layer spot checks).
  auto* cond = const_cast<numcore::Mlp*>(&f.layers[0].conditioner());
  auto param_loss = [&] { return f.logq(theta, u).logq; };
  for (std::size_t s = 0; s < cond->w[0].a.size(); s += 7) {
    const double fd = oracles::central_diff_param(param_loss, cond->w[0].a[s], 1e-5);
    CHECK(oracles::rel_err(fd, grads[0].w[0].a[s]) < 1e-4);
  }
}

TEST_CASE("rounding surjection forward") {
  auto r = round_forward({2.7, 0.3}, 8);
  CHECK(r.theta[0] == 2);
  CHECK(r.theta[1] == 0);
  CHECK_FALSE(r.out_of_domain);

  r = round_forward({3.0}, 8);
  CHECK(r.theta[0] == 3);
  CHECK_FALSE(r.out_of_domain);

  r = round_forward({-0.2}, 4);
  CHECK(r.theta[0] == 0);
  CHECK(r.out_of_domain);

  r = round_forward({5.1}, 4);
  CHECK(r.theta[0] == 3);
  CHECK(r.out_of_domain);
}

TEST_CASE("rounding surjection inverse and round trip") {
  const std::vector<int> theta{2};
  const Vec x = round_inverse(theta, {0.7});
  CHECK(x[0] == doctest::Approx(2.7));
  CHECK_THROWS_AS(round_inverse(theta, {1.0}), DomainError);
  CHECK_THROWS_AS(round_inverse(theta, {-0.1}), DomainError);

  Rng rng(67);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> th{static_cast<int>(rng.uniform_int(6)),
                        static_cast<int>(rng.uniform_int(6))};
    const Vec u{rng.uniform(), rng.uniform()};
    const auto back = round_forward(round_inverse(th, u), 6);
    CHECK(back.theta[0] == th[0]);
    CHECK(back.theta[1] == th[1]);
    CHECK_FALSE(back.out_of_domain);
  }
}

TEST_CASE("checkpoint: save/load round trip preserves behaviour exactly") {
  Rng rng(71);
  flows::FlowModel model;
  model.tphi = random_stack(3, 4, rng);
  RangeMap rm;
  rm.lo = {0.0, 0.0, 0.0};
  rm.hi = {4.0, 4.0, 4.0};
  rm.extent = 3.0;
  Vec scale(3), shift(3);
  for (int i = 0; i < 3; ++i) {
    scale[i] = 4.0 / 6.0;
    shift[i] = 2.0;
  }
  model.tphi.layers.emplace_back(AffineLayer(scale, shift));
  model.tlambda = random_dequant(3, 4, 2, rng);

  const std::string path = "/tmp/discflow_test_ckpt.bin";
  save_checkpoint(path, model);
  const flows::FlowModel back = load_checkpoint(path);
  CHECK(back.tphi.dim == 3);
  CHECK(back.tlambda.levels == 4);

  const Vec z{0.2, -0.9, 1.4};
  const auto [x0, l0] = stack_forward(model.tphi, z);
  const auto [x1, l1] = stack_forward(back.tphi, z);
  CHECK(l0 == l1);
  for (int i = 0; i < 3; ++i) CHECK(x0[i] == x1[i]);

  const int theta[3] = {1, 0, 3};
  const auto [u0, q0] = model.tlambda.sample(theta, {0.1, -0.4, 0.9});
  const auto [u1, q1] = back.tlambda.sample(theta, {0.1, -0.4, 0.9});
  CHECK(q0 == q1);
  for (int i = 0; i < 3; ++i) CHECK(u0[i] == u1[i]);
}
