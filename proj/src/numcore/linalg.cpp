#include "discflow/numcore/linalg.hpp"

#include <cmath>
#include <limits>

namespace discflow::numcore {

bool cholesky_solve_spd(Mat a, Vec b, Vec& x) {
  const int n = a.rows;
  if (n != a.cols || static_cast<int>(b.size()) != n) {
    throw DimensionError("cholesky_solve_spd: shape mismatch");
  }
  // a <- L with A = L L^T (lower triangle).
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  // Forward then backward substitution.
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= a(i, k) * b[k];
    b[i] = s / a(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= a(k, i) * b[k];
    b[i] = s / a(i, i);
  }
  x = std::move(b);
  return true;
}

double log_abs_det(Mat a) {
  const int n = a.rows;
  if (n != a.cols) throw DimensionError("log_abs_det: square matrix required");
  double logdet = 0.0;
  for (int j = 0; j < n; ++j) {
    int piv = j;
    double best = std::fabs(a(j, j));
    for (int i = j + 1; i < n; ++i) {
      const double v = std::fabs(a(i, j));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return -std::numeric_limits<double>::infinity();
    if (piv != j) {
      for (int c = 0; c < n; ++c) std::swap(a(j, c), a(piv, c));
    }
    logdet += std::log(std::fabs(a(j, j)));
    for (int i = j + 1; i < n; ++i) {
      const double f = a(i, j) / a(j, j);
      for (int c = j; c < n; ++c) a(i, c) -= f * a(j, c);
    }
  }
  return logdet;
}

}  // namespace discflow::numcore
