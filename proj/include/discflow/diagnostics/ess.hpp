#pragma once

#include <span>
#include <vector>

#include "discflow/numcore/vec.hpp"

namespace discflow::diagnostics {

using numcore::Vec;

struct Ess1dResult {
  double ess = 0.0;
  bool degenerate = false;  // zero-variance series
};

// ESS = N / (1 + 2 sum rho_t) with Geyer's initial monotone positive
// sequence truncation of the empirical autocorrelations, clipped to (0, N].
// A zero-variance series returns N with the degenerate flag set.
Ess1dResult ess_1d(std::span<const double> series);

// Multi-chain variant: autocovariances are computed per chain about the
// pooled mean and averaged, which keeps the estimate invariant under chain
// reordering; N is the pooled sample count. Unmixed chains (distinct
// per-chain levels) inflate the long-lag autocovariance and drive ESS down,
// as they should.
Ess1dResult ess_pooled(const std::vector<std::span<const double>>& chains);

struct EssReport {
  double ess_mean = 0.0;    // mean over groups, per 1e4 kept samples
  double ess_stderr = 0.0;  // standard error over the group estimates
  int n_groups = 0;
  double ess_per_min = 0.0;
  double logpi_mean = 0.0;
  double logpi_stderr = 0.0;
  long total_kept = 0;  // per-chain kept count * n_chains
};

// Per-dimension ESS within each group of `group_size` chains, averaged over
// dimensions and normalized per 1e4 samples; mean +- stderr over groups.
// `at(chain, step, dim)` adapts either theta (cast to real) or z storage.
template <typename At>
EssReport grouped_ess(int n_chains, long n_kept, int dim, At at, int group_size = 16);

// Total effective samples per minute: the grouped mean (per 1e4) scaled by
// the kept-sample count and divided by the wall-clock total. Flow+MH passes
// its training time; baselines pass zero and include burn-in in sampling_s.
double ess_per_minute(const EssReport& report, double sampling_seconds,
                      double training_seconds);

// Sample mean and naive standard error.
std::pair<double, double> mean_stderr(std::span<const double> values);

// Implementation.
EssReport grouped_ess_buffered(int n_chains, long n_kept, int dim, const double* buffer,
                               int group_size);

template <typename At>
EssReport grouped_ess(int n_chains, long n_kept, int dim, At at, int group_size) {
  std::vector<double> buf(static_cast<std::size_t>(n_chains) * n_kept * dim);
  for (int c = 0; c < n_chains; ++c) {
    for (long t = 0; t < n_kept; ++t) {
      for (int j = 0; j < dim; ++j) {
        buf[(static_cast<std::size_t>(c) * n_kept + t) * dim + j] = at(c, t, j);
      }
    }
  }
  return grouped_ess_buffered(n_chains, n_kept, dim, buf.data(), group_size);
}

}  // namespace discflow::diagnostics
