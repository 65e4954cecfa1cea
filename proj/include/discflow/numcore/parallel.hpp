#pragma once

#include <functional>

namespace discflow::numcore {

// Runs fn(block) for block = 0..n_blocks-1 on up to n_threads worker threads
// (n_threads <= 1 runs inline). Blocks are independent units of work; callers
// that need determinism must reduce per-block results in block order.
void parallel_blocks(int n_blocks, int n_threads, const std::function<void(int)>& fn);

int default_threads();

}  // namespace discflow::numcore
