#pragma once

#include "discflow/numcore/vec.hpp"
#include "discflow/targets/target.hpp"

namespace discflow::targets {

using numcore::Vec;

struct GmmComponent {
  Vec mean;
  Vec sigma;  // per-dimension standard deviations
  double weight = 1.0;
};

// Gaussian mixture discretized onto 2^bits levels per dimension over a box
// that covers at least +-6 sigma of every component. log_prob_unnorm(theta)
// is the exact log mass of the grid cell (CDF differences), so exhaustive
// enumeration recovers the box mass exactly.
class DiscretizedGmm final : public DiscreteTarget {
 public:
  DiscretizedGmm(std::vector<GmmComponent> components, int bits, double box_sigma = 6.0);

  double log_prob_unnorm(std::span<const int> theta) const override;

  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }
  double cell_width(int d) const { return width_[d]; }
  const std::vector<GmmComponent>& components() const { return comps_; }

  // log of the total mixture mass inside the bounding box.
  double box_log_mass() const;

 private:
  std::vector<GmmComponent> comps_;
  Vec lo_, hi_, width_;
};

// log(Phi(b) - Phi(a)) for a <= b, stable in both tails.
double log_normal_interval_mass(double a, double b);

}  // namespace discflow::targets
