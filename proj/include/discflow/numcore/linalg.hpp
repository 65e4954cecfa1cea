#pragma once

#include "discflow/numcore/mat.hpp"

namespace discflow::numcore {

// Solves A x = b for symmetric positive definite A (in-place Cholesky on a
// copy). Returns false if a pivot is not strictly positive.
bool cholesky_solve_spd(Mat a, Vec b, Vec& x);

// log |det A| by LU with partial pivoting; returns -inf for singular A.
double log_abs_det(Mat a);

}  // namespace discflow::numcore
