#include "discflow/targets/target.hpp"

#include <cmath>
#include <string>

namespace discflow::targets {

double DiscreteTarget::log_prob_delta(std::span<const int> theta, int coord,
                                      int new_value) const {
  if (theta[coord] == new_value) return 0.0;
  std::vector<int> moved(theta.begin(), theta.end());
  moved[coord] = new_value;
  return log_prob_unnorm(moved) - log_prob_unnorm(theta);
}

void DiscreteTarget::check_theta(std::span<const int> theta) const {
  if (theta.size() != static_cast<std::size_t>(dim_)) {
    throw DimensionError("target: theta has dimension " + std::to_string(theta.size()) +
                         ", expected " + std::to_string(dim_));
  }
  for (int v : theta) {
    if (v < 0 || v >= levels_) throw DomainError("target: theta outside the grid");
  }
}

TableTarget::TableTarget(int dim, int levels, std::vector<double> log_mass)
    : DiscreteTarget(dim, levels), log_mass_(std::move(log_mass)) {
  std::size_t want = 1;
  for (int i = 0; i < dim; ++i) want *= static_cast<std::size_t>(levels);
  if (log_mass_.size() != want) throw DimensionError("TableTarget: table size mismatch");
  for (double v : log_mass_) {
    if (!std::isfinite(v)) throw NumericError("TableTarget: non-finite log mass");
  }
}

std::size_t TableTarget::flat_index(std::span<const int> theta) const {
  check_theta(theta);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    idx = idx * static_cast<std::size_t>(levels()) + static_cast<std::size_t>(theta[i]);
  }
  return idx;
}

double TableTarget::log_prob_unnorm(std::span<const int> theta) const {
  return log_mass_[flat_index(theta)];
}

}  // namespace discflow::targets
