#pragma once

#include <complex>
#include <vector>

#include "discflow/numcore/vec.hpp"

namespace discflow::numcore {

// In-place iterative radix-2 FFT; a.size() must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Biased autocovariance gamma_t = (1/N) sum_i x_i x_{i+t} of an already
// centered series, for t = 0..max_lag, via zero-padded FFT.
Vec autocovariance(std::span<const double> centered, int max_lag);

}  // namespace discflow::numcore
