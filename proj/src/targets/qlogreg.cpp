#include "discflow/targets/qlogreg.hpp"

#include <cmath>

namespace discflow::targets {

QuantizedLogReg::QuantizedLogReg(Mat x, std::vector<int> labels, int n_classes, int bits,
                                 double lo, double hi)
    : DiscreteTarget(n_classes * (x.cols + 1), 1 << bits),
      x_(std::move(x)),
      y_(std::move(labels)),
      classes_(n_classes),
      lo_(lo),
      step_((hi - lo) / static_cast<double>((1 << bits) - 1)) {
  if (n_classes < 2) throw DomainError("QuantizedLogReg: need at least two classes");
  if (!(hi > lo)) throw DomainError("QuantizedLogReg: grid range must be increasing");
  if (y_.size() != static_cast<std::size_t>(x_.rows)) {
    throw DimensionError("QuantizedLogReg: label count mismatch");
  }
  for (int v : y_) {
    if (v < 0 || v >= n_classes) throw DomainError("QuantizedLogReg: label out of range");
  }
}

double QuantizedLogReg::log_prob_unnorm(std::span<const int> theta) const {
  check_theta(theta);
  const int f = x_.cols;
  const int stride = f + 1;
  double loglik = 0.0;
  std::vector<double> logits(classes_);
  for (int i = 0; i < x_.rows; ++i) {
    const double* xi = x_.row(i);
    for (int c = 0; c < classes_; ++c) {
      double z = grid_value(theta[c * stride + f]);  // bias
      for (int j = 0; j < f; ++j) z += grid_value(theta[c * stride + j]) * xi[j];
      logits[c] = z;
    }
    double m = logits[0];
    for (int c = 1; c < classes_; ++c) m = std::max(m, logits[c]);
    double lse = 0.0;
    for (int c = 0; c < classes_; ++c) lse += std::exp(logits[c] - m);
    loglik += logits[y_[i]] - m - std::log(lse);
  }
  return loglik;
}

}  // namespace discflow::targets
