#pragma once

#include <cstdint>
#include <random>

#include "discflow/numcore/vec.hpp"

namespace discflow::numcore {

// Deterministic RNG stream. Uniform and normal variates are generated with
// explicit arithmetic (not std distributions) so that identical seeds give
// identical streams on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Box-Muller with cached spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, n), n >= 1 (Lemire rejection).
  std::uint64_t uniform_int(std::uint64_t n) {
    while (true) {
      const std::uint64_t x = next_u64();
      const __uint128_t m = static_cast<__uint128_t>(x) * n;
      const auto lo = static_cast<std::uint64_t>(m);
      if (lo < n) {
        const std::uint64_t t = (0 - n) % n;
        if (lo < t) continue;
      }
      return static_cast<std::uint64_t>(m >> 64);
    }
  }

  Vec normal_vec(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = normal();
    return v;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace discflow::numcore
