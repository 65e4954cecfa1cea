#pragma once

#include "discflow/numcore/mat.hpp"
#include "discflow/numcore/rng.hpp"
#include "discflow/targets/target.hpp"

namespace discflow::targets {

using numcore::Mat;
using numcore::Vec;

// Bayesian variable selection under the conjugate g-prior-style model: theta
// is a binary inclusion vector over the k columns of X, and
//   log pi(theta) = -(k_theta/2) log(1+nu^2) - ((n+alpha)/2) log(alpha*w + S(theta)),
//   S(theta) = y'y - nu^2/(1+nu^2) * y'X_th (X_th'X_th)^{-1} X_th'y,
// with beta and sigma^2 marginalized out; additive constants dropped.
class BayesVarSelect final : public DiscreteTarget {
 public:
  BayesVarSelect(Mat x, Vec y, double nu = 10.0, double w = 1.0, double alpha = 1.0);

  double log_prob_unnorm(std::span<const int> theta) const override;

  int n_examples() const { return n_; }
  double nu() const { return nu_; }
  double w() const { return w_; }
  double alpha() const { return alpha_; }
  const Mat& x() const { return x_; }
  const Vec& y() const { return y_; }

 private:
  Mat x_;
  Vec y_;
  double nu_, w_, alpha_;
  int n_;
  Mat gram_;   // X'X
  Vec xty_;    // X'y
  double yty_;
};

struct SyntheticBvs {
  BayesVarSelect target;
  std::vector<int> support;  // indices of the informative features
  Vec beta;                  // true coefficients (dense, zero off support)
  Mat x;
  Vec y;
};

// Gaussian design, k_informative nonzero coefficients on a random support,
// y = X beta + noise_sigma * eps.
SyntheticBvs make_synthetic_bvs(int d, int k_informative, int n, double noise_sigma,
                                std::uint64_t seed);

}  // namespace discflow::targets
