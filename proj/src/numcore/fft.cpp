#include "discflow/numcore/fft.hpp"

#include <cmath>

namespace discflow::numcore {

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw DimensionError("fft_inplace: size must be a power of two");
  }
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

Vec autocovariance(std::span<const double> centered, int max_lag) {
  const std::size_t n = centered.size();
  if (n == 0) throw DimensionError("autocovariance: empty series");
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) buf[i] = centered[i];
  fft_inplace(buf, false);
  for (auto& x : buf) x = x * std::conj(x);
  fft_inplace(buf, true);
  const int lags = std::min<int>(max_lag, static_cast<int>(n) - 1);
  Vec gamma(static_cast<std::size_t>(lags) + 1);
  for (int t = 0; t <= lags; ++t) gamma[t] = buf[t].real() / static_cast<double>(n);
  return gamma;
}

}  // namespace discflow::numcore
