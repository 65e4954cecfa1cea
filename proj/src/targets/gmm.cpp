#include "discflow/targets/gmm.hpp"

#include <cmath>
#include <limits>

namespace discflow::targets {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

// log Phi(x); asymptotic expansion in the far left tail where erfc underflows.
double log_ndtr(double x) {
  if (x > -20.0) {
    return std::log(0.5 * std::erfc(-x / kSqrt2));
  }
  const double x2 = x * x;
  // Phi(x) ~ phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6)
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - kLogSqrt2Pi - std::log(-x) + std::log(series);
}

double log1mexp(double neg) {
  // log(1 - exp(neg)) for neg < 0.
  if (neg > -0.6931471805599453) return std::log(-std::expm1(neg));
  return std::log1p(-std::exp(neg));
}

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double log_normal_interval_mass(double a, double b) {
  if (!(a <= b)) throw DomainError("log_normal_interval_mass: need a <= b");
  if (a == b) return -std::numeric_limits<double>::infinity();
  // Reflect right-tail intervals so the difference is between left-tail CDFs.
  if (a >= 0.0) {
    const double t = a;
    a = -b;
    b = -t;
  }
  const double la = log_ndtr(a);
  const double lb = log_ndtr(b);
  return lb + log1mexp(la - lb);
}

DiscretizedGmm::DiscretizedGmm(std::vector<GmmComponent> components, int bits, double box_sigma)
    : DiscreteTarget(components.empty() ? 1 : static_cast<int>(components.front().mean.size()),
                     1 << bits),
      comps_(std::move(components)) {
  if (comps_.empty()) throw DomainError("DiscretizedGmm: no components");
  if (bits <= 0 || bits > 20) throw DomainError("DiscretizedGmm: bad bit depth");
  const int d = dim();
  double wsum = 0.0;
  for (const auto& c : comps_) {
    if (static_cast<int>(c.mean.size()) != d || static_cast<int>(c.sigma.size()) != d) {
      throw DimensionError("DiscretizedGmm: component shape mismatch");
    }
    if (!(c.weight > 0.0)) throw DomainError("DiscretizedGmm: weights must be positive");
    for (double s : c.sigma) {
      if (!(s > 0.0)) throw DomainError("DiscretizedGmm: sigmas must be positive");
    }
    wsum += c.weight;
  }
  if (std::fabs(wsum - 1.0) > 1e-9) throw DomainError("DiscretizedGmm: weights must sum to 1");

  lo_.assign(d, std::numeric_limits<double>::infinity());
  hi_.assign(d, -std::numeric_limits<double>::infinity());
  for (const auto& c : comps_) {
    for (int i = 0; i < d; ++i) {
      lo_[i] = std::min(lo_[i], c.mean[i] - box_sigma * c.sigma[i]);
      hi_[i] = std::max(hi_[i], c.mean[i] + box_sigma * c.sigma[i]);
    }
  }
  width_.resize(d);
  for (int i = 0; i < d; ++i) {
    width_[i] = (hi_[i] - lo_[i]) / static_cast<double>(levels());
  }
}

double DiscretizedGmm::log_prob_unnorm(std::span<const int> theta) const {
  check_theta(theta);
  const int d = dim();
  double acc = -std::numeric_limits<double>::infinity();
  for (const auto& c : comps_) {
    double lp = std::log(c.weight);
    for (int i = 0; i < d; ++i) {
      const double cl = lo_[i] + width_[i] * theta[i];
      const double ch = cl + width_[i];
      lp += log_normal_interval_mass((cl - c.mean[i]) / c.sigma[i], (ch - c.mean[i]) / c.sigma[i]);
    }
    acc = logsumexp2(acc, lp);
  }
  return acc;
}

double DiscretizedGmm::box_log_mass() const {
  double acc = -std::numeric_limits<double>::infinity();
  for (const auto& c : comps_) {
    double lp = std::log(c.weight);
    for (int i = 0; i < dim(); ++i) {
      lp += log_normal_interval_mass((lo_[i] - c.mean[i]) / c.sigma[i],
                                     (hi_[i] - c.mean[i]) / c.sigma[i]);
    }
    acc = logsumexp2(acc, lp);
  }
  return acc;
}

}  // namespace discflow::targets
