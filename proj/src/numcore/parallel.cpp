#include "discflow/numcore/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace discflow::numcore {

void parallel_blocks(int n_blocks, int n_threads, const std::function<void(int)>& fn) {
  if (n_blocks <= 0) return;
  const int workers = std::min(n_threads, n_blocks);
  if (workers <= 1) {
    for (int b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto worker = [&] {
    while (true) {
      const int b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<int>(static_cast<int>(hw), 1, 16);
}

}  // namespace discflow::numcore
