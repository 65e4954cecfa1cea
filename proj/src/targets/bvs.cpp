#include "discflow/targets/bvs.hpp"

#include <cmath>

#include "discflow/numcore/linalg.hpp"

namespace discflow::targets {

namespace {
constexpr double kRidgeJitter = 1e-8;
}

BayesVarSelect::BayesVarSelect(Mat x, Vec y, double nu, double w, double alpha)
    : DiscreteTarget(x.cols, 2),
      x_(std::move(x)),
      y_(std::move(y)),
      nu_(nu),
      w_(w),
      alpha_(alpha),
      n_(x_.rows) {
  if (n_ <= 0) throw DomainError("BayesVarSelect: empty dataset");
  if (y_.size() != static_cast<std::size_t>(n_)) {
    throw DimensionError("BayesVarSelect: y size mismatch");
  }
  const int k = x_.cols;
  gram_ = Mat(k, k);
  xty_.assign(k, 0.0);
  for (int i = 0; i < n_; ++i) {
    const double* xi = x_.row(i);
    for (int a = 0; a < k; ++a) {
      xty_[a] += xi[a] * y_[i];
      for (int b = a; b < k; ++b) gram_(a, b) += xi[a] * xi[b];
    }
  }
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < a; ++b) gram_(a, b) = gram_(b, a);
  }
  yty_ = numcore::dot(y_, y_);
}

double BayesVarSelect::log_prob_unnorm(std::span<const int> theta) const {
  check_theta(theta);
  std::vector<int> sel;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta[i] != 0) sel.push_back(static_cast<int>(i));
  }
  const int kth = static_cast<int>(sel.size());
  double s = yty_;
  if (kth > 0) {
    Mat g(kth, kth);
    Vec b(kth);
    for (int a = 0; a < kth; ++a) {
      b[a] = xty_[sel[a]];
      for (int c = 0; c < kth; ++c) g(a, c) = gram_(sel[a], sel[c]);
      g(a, a) += kRidgeJitter;
    }
    Vec sol;
    if (!cholesky_solve_spd(std::move(g), b, sol)) {
      throw NumericError("bvs_logprob: selected Gram matrix not positive definite");
    }
    double quad = 0.0;
    for (int a = 0; a < kth; ++a) quad += xty_[sel[a]] * sol[a];
    s -= nu_ * nu_ / (1.0 + nu_ * nu_) * quad;
  }
  return -0.5 * kth * std::log1p(nu_ * nu_) -
         0.5 * (static_cast<double>(n_) + alpha_) * std::log(alpha_ * w_ + s);
}

SyntheticBvs make_synthetic_bvs(int d, int k_informative, int n, double noise_sigma,
                                std::uint64_t seed) {
  if (k_informative > d || k_informative < 0) {
    throw DomainError("make_synthetic_bvs: k_informative must be in [0, d]");
  }
  numcore::Rng rng(seed);
  Mat x(n, d);
  for (auto& v : x.a) v = rng.normal();

  // Random support via partial Fisher-Yates.
  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  for (int i = 0; i < k_informative; ++i) {
    const int j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d - i)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> support(perm.begin(), perm.begin() + k_informative);
  std::sort(support.begin(), support.end());

  Vec beta(d, 0.0);
  for (int idx : support) {
    const double mag = 1.0 + rng.uniform();  // in [1, 2): clearly informative
    beta[idx] = rng.uniform() < 0.5 ? mag : -mag;
  }

  Vec y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* xi = x.row(i);
    for (int j = 0; j < d; ++j) acc += xi[j] * beta[j];
    y[i] = acc + noise_sigma * rng.normal();
  }
  return SyntheticBvs{BayesVarSelect(x, y), std::move(support), std::move(beta), std::move(x),
                      std::move(y)};
}

}  // namespace discflow::targets
