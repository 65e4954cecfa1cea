#pragma once

#include <cstddef>

#include "discflow/numcore/vec.hpp"

namespace discflow::numcore {

// Dense row-major matrix. Shape is fixed at construction.
struct Mat {
  int rows = 0;
  int cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
  double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
};

// y = W x
inline void matvec(const Mat& w, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < w.rows; ++r) {
    const double* wr = w.row(r);
    double acc = 0.0;
    for (int c = 0; c < w.cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

// y = W^T x
inline void matvec_t(const Mat& w, std::span<const double> x, std::span<double> y) {
  for (int c = 0; c < w.cols; ++c) y[c] = 0.0;
  for (int r = 0; r < w.rows; ++r) {
    const double* wr = w.row(r);
    const double xr = x[r];
    for (int c = 0; c < w.cols; ++c) y[c] += wr[c] * xr;
  }
}

// G += g x^T
inline void outer_acc(std::span<const double> g, std::span<const double> x, Mat& grad) {
  for (int r = 0; r < grad.rows; ++r) {
    double* gr = grad.row(r);
    const double gv = g[r];
    for (int c = 0; c < grad.cols; ++c) gr[c] += gv * x[c];
  }
}

}  // namespace discflow::numcore
