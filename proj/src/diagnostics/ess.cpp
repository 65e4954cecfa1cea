#include "discflow/diagnostics/ess.hpp"

#include <cmath>

#include "discflow/errors.hpp"
#include "discflow/numcore/fft.hpp"

namespace discflow::diagnostics {

namespace {

// Geyer's initial monotone positive sequence applied to averaged
// autocovariances; returns the integrated autocorrelation time tau >= 0.
double geyer_tau(const Vec& gamma) {
  const double g0 = gamma[0];
  double tau = -1.0;
  double prev = 1e300;
  for (std::size_t m = 0; 2 * m + 1 < gamma.size(); ++m) {
    double pair = (gamma[2 * m] + gamma[2 * m + 1]) / g0;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev);  // enforce monotone non-increasing
    prev = pair;
    tau += 2.0 * pair;
  }
  return tau;
}

Ess1dResult ess_from_gamma(const Vec& gamma, double n_total) {
  Ess1dResult res;
  if (!(gamma[0] > 0.0)) {
    res.ess = n_total;
    res.degenerate = true;
    return res;
  }
  const double tau = geyer_tau(gamma);
  double ess = tau > 0.0 ? n_total / tau : n_total;
  ess = std::min(ess, n_total);
  ess = std::max(ess, 1e-12);
  res.ess = ess;
  return res;
}

}  // namespace

Ess1dResult ess_1d(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw DimensionError("ess_1d: need at least 10 samples");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  Vec centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;
  const Vec gamma = numcore::autocovariance(centered, static_cast<int>(n) - 1);
  return ess_from_gamma(gamma, static_cast<double>(n));
}

Ess1dResult ess_pooled(const std::vector<std::span<const double>>& chains) {
  if (chains.empty()) throw DimensionError("ess_pooled: no chains");
  const std::size_t t = chains.front().size();
  if (t < 10) throw DimensionError("ess_pooled: need at least 10 samples per chain");
  double mean = 0.0;
  for (const auto& c : chains) {
    if (c.size() != t) throw DimensionError("ess_pooled: unequal chain lengths");
    for (double v : c) mean += v;
  }
  const double n_total = static_cast<double>(t) * static_cast<double>(chains.size());
  mean /= n_total;

  Vec gamma(t, 0.0);
  Vec centered(t);
  for (const auto& c : chains) {
    for (std::size_t i = 0; i < t; ++i) centered[i] = c[i] - mean;
    const Vec g = numcore::autocovariance(centered, static_cast<int>(t) - 1);
    for (std::size_t i = 0; i < t; ++i) gamma[i] += g[i];
  }
  for (auto& v : gamma) v /= static_cast<double>(chains.size());
  return ess_from_gamma(gamma, n_total);
}

EssReport grouped_ess_buffered(int n_chains, long n_kept, int dim, const double* buffer,
                               int group_size) {
  if (group_size <= 0 || n_chains % group_size != 0) {
    throw ConfigError("grouped_ess: chain count must be divisible by the group size");
  }
  const int n_groups = n_chains / group_size;
  Vec group_vals(n_groups, 0.0);
  Vec series(static_cast<std::size_t>(group_size) * n_kept);

  for (int g = 0; g < n_groups; ++g) {
    double dim_sum = 0.0;
    for (int j = 0; j < dim; ++j) {
      std::vector<std::span<const double>> chains;
      chains.reserve(group_size);
      for (int cc = 0; cc < group_size; ++cc) {
        const int c = g * group_size + cc;
        double* dst = series.data() + static_cast<std::size_t>(cc) * n_kept;
        for (long t = 0; t < n_kept; ++t) {
          dst[t] = buffer[(static_cast<std::size_t>(c) * n_kept + t) * dim + j];
        }
        chains.emplace_back(dst, static_cast<std::size_t>(n_kept));
      }
      dim_sum += ess_pooled(chains).ess;
    }
    const double pooled_n = static_cast<double>(group_size) * static_cast<double>(n_kept);
    group_vals[g] = dim_sum / static_cast<double>(dim) * (1e4 / pooled_n);
  }

  EssReport rep;
  rep.n_groups = n_groups;
  rep.total_kept = static_cast<long>(n_chains) * n_kept;
  const auto [m, se] = mean_stderr(group_vals);
  rep.ess_mean = m;
  rep.ess_stderr = se;
  return rep;
}

double ess_per_minute(const EssReport& report, double sampling_seconds,
                      double training_seconds) {
  const double minutes = (sampling_seconds + training_seconds) / 60.0;
  if (!(minutes > 0.0)) throw DomainError("ess_per_minute: wall-clock time must be positive");
  const double total_effective =
      report.ess_mean * static_cast<double>(report.total_kept) / 1e4;
  return total_effective / minutes;
}

std::pair<double, double> mean_stderr(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw DimensionError("mean_stderr: empty input");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n))};
}

}  // namespace discflow::diagnostics
