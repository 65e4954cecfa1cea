#pragma once

#include "discflow/diagnostics/ess.hpp"
#include "discflow/targets/target.hpp"

namespace discflow::diagnostics {

// Mean and naive standard error of log pi over kept samples
// ([sample][dim] layout, any chain ordering).
std::pair<double, double> mean_logprob(const int* samples, long n_samples, int dim,
                                       const targets::DiscreteTarget& target);

// Evaluates log pi for every kept sample (the series behind the mean).
Vec logprob_series(const int* samples, long n_samples, int dim,
                   const targets::DiscreteTarget& target);

}  // namespace discflow::diagnostics
