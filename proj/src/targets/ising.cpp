#include "discflow/targets/ising.hpp"

namespace discflow::targets {

IsingDenoise::IsingDenoise(int height, int width, double beta, double eta,
                           std::vector<int> corrupted_pm1)
    : DiscreteTarget(height * width, 2),
      h_(height),
      w_(width),
      beta_(beta),
      eta_(eta),
      x_(std::move(corrupted_pm1)) {
  if (height <= 0 || width <= 0) throw DomainError("IsingDenoise: bad lattice shape");
  if (!(beta >= 0.0) || !(eta >= 0.0)) {
    throw DomainError("IsingDenoise: beta, eta must be non-negative");
  }
  if (x_.size() != static_cast<std::size_t>(h_ * w_)) {
    throw DimensionError("IsingDenoise: corrupted image size mismatch");
  }
  for (int v : x_) {
    if (v != -1 && v != 1) throw DomainError("IsingDenoise: corrupted pixels must be +-1");
  }
}

double IsingDenoise::log_prob_unnorm(std::span<const int> theta) const {
  check_theta(theta);
  double pair = 0.0, field = 0.0;
  for (int r = 0; r < h_; ++r) {
    for (int c = 0; c < w_; ++c) {
      const int i = r * w_ + c;
      const int s = 2 * theta[i] - 1;
      if (c + 1 < w_) pair += static_cast<double>(s * (2 * theta[i + 1] - 1));
      if (r + 1 < h_) pair += static_cast<double>(s * (2 * theta[i + w_] - 1));
      field += static_cast<double>(s * x_[i]);
    }
  }
  return beta_ * pair + eta_ * field;
}

double IsingDenoise::log_prob_delta(std::span<const int> theta, int coord, int new_value) const {
  const int s_old = 2 * theta[coord] - 1;
  const int s_new = 2 * new_value - 1;
  if (s_old == s_new) return 0.0;
  const int r = coord / w_;
  const int c = coord % w_;
  int nbr = 0;
  if (c > 0) nbr += 2 * theta[coord - 1] - 1;
  if (c + 1 < w_) nbr += 2 * theta[coord + 1] - 1;
  if (r > 0) nbr += 2 * theta[coord - w_] - 1;
  if (r + 1 < h_) nbr += 2 * theta[coord + w_] - 1;
  const double ds = static_cast<double>(s_new - s_old);
  return ds * (beta_ * static_cast<double>(nbr) + eta_ * static_cast<double>(x_[coord]));
}

std::vector<int> corrupt_binary(const std::vector<int>& image, double p, numcore::Rng& rng) {
  std::vector<int> out = image;
  for (auto& v : out) {
    if (rng.uniform() < p) v = 1 - v;
  }
  return out;
}

}  // namespace discflow::targets
