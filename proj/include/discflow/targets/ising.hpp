#pragma once

#include "discflow/numcore/rng.hpp"
#include "discflow/targets/target.hpp"

namespace discflow::targets {

// Denoising posterior for a 4-neighbour Ising lattice with spins s = 2*theta - 1:
//   log pi(theta) = beta * sum_{<i,j>} s_i s_j + eta * sum_i s_i x_i,
// each undirected edge counted once; x is the corrupted image in {-1,+1}.
class IsingDenoise final : public DiscreteTarget {
 public:
  IsingDenoise(int height, int width, double beta, double eta, std::vector<int> corrupted_pm1);

  double log_prob_unnorm(std::span<const int> theta) const override;
  double log_prob_delta(std::span<const int> theta, int coord, int new_value) const override;

  int height() const { return h_; }
  int width() const { return w_; }
  double beta() const { return beta_; }
  double eta() const { return eta_; }
  const std::vector<int>& corrupted() const { return x_; }

 private:
  int h_, w_;
  double beta_, eta_;
  std::vector<int> x_;
};

// Flips each {0,1} pixel independently with probability p.
std::vector<int> corrupt_binary(const std::vector<int>& image, double p, numcore::Rng& rng);

}  // namespace discflow::targets
