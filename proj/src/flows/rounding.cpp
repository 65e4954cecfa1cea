#include "discflow/flows/rounding.hpp"

#include <cmath>

#include "discflow/errors.hpp"

namespace discflow::flows {

RoundResult round_forward(const Vec& x, int levels) {
  if (levels <= 0) throw DomainError("round_forward: levels must be positive");
  numcore::require_finite(x, "round_forward input");
  RoundResult r;
  r.theta.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = std::floor(x[i]);
    long v = static_cast<long>(f);
    if (v < 0) {
      v = 0;
      r.out_of_domain = true;
    } else if (v >= levels) {
      v = levels - 1;
      r.out_of_domain = true;
    }
    r.theta[i] = static_cast<int>(v);
  }
  return r;
}

Vec round_inverse(std::span<const int> theta, const Vec& u) {
  if (theta.size() != u.size()) throw DimensionError("round_inverse: shape mismatch");
  Vec x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] >= 0.0) || !(u[i] < 1.0)) {
      throw DomainError("round_inverse: u outside [0, 1)");
    }
    x[i] = static_cast<double>(theta[i]) + u[i];
  }
  return x;
}

}  // namespace discflow::flows
