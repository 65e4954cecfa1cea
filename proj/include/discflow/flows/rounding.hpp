#pragma once

#include <span>
#include <vector>

#include "discflow/numcore/vec.hpp"

namespace discflow::flows {

using numcore::Vec;

// The rounding surjection: x -> floor(x), with the stochastic inverse
// x = theta + u supported on the half-open unit box [theta, theta + 1).
struct RoundResult {
  std::vector<int> theta;
  bool out_of_domain = false;  // set when any floor value was clamped into the grid
};

// theta_i = floor(x_i) clamped into {0, ..., levels-1}; the flag records
// whether clamping occurred.
RoundResult round_forward(const Vec& x, int levels);

// x = theta + u. Throws DomainError unless every u_i is in [0, 1).
Vec round_inverse(std::span<const int> theta, const Vec& u);

}  // namespace discflow::flows
