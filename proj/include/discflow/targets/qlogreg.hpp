#pragma once

#include "discflow/numcore/mat.hpp"
#include "discflow/targets/target.hpp"

namespace discflow::targets {

using numcore::Mat;
using numcore::Vec;

// Multinomial logistic regression with weights and biases quantized onto a
// uniform grid (2^bits levels over [lo, hi]); flat prior. Parameter layout is
// class-major: for class c, the feature weights then the bias, so
// dim = n_classes * (n_features + 1).
class QuantizedLogReg final : public DiscreteTarget {
 public:
  QuantizedLogReg(Mat x, std::vector<int> labels, int n_classes, int bits = 4, double lo = -2.0,
                  double hi = 2.0);

  double log_prob_unnorm(std::span<const int> theta) const override;

  double grid_value(int level) const { return lo_ + step_ * static_cast<double>(level); }
  int n_features() const { return x_.cols; }
  int n_classes() const { return classes_; }
  int n_examples() const { return x_.rows; }

 private:
  Mat x_;
  std::vector<int> y_;
  int classes_;
  double lo_, step_;
};

}  // namespace discflow::targets
