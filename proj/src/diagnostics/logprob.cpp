#include "discflow/diagnostics/logprob.hpp"

namespace discflow::diagnostics {

Vec logprob_series(const int* samples, long n_samples, int dim,
                   const targets::DiscreteTarget& target) {
  if (n_samples <= 0) throw DimensionError("logprob_series: empty sample set");
  Vec series(static_cast<std::size_t>(n_samples));
  for (long i = 0; i < n_samples; ++i) {
    series[i] = target.log_prob_unnorm(
        std::span<const int>(samples + static_cast<std::size_t>(i) * dim, dim));
  }
  return series;
}

std::pair<double, double> mean_logprob(const int* samples, long n_samples, int dim,
                                       const targets::DiscreteTarget& target) {
  const Vec series = logprob_series(samples, n_samples, dim, target);
  return mean_stderr(series);
}

}  // namespace discflow::diagnostics
