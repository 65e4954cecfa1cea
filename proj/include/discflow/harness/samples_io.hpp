#pragma once

#include <string>
#include <vector>

namespace discflow::harness {

// Discrete sample tensor [chain][kept][dim] with its shape.
struct SampleSet {
  std::vector<int> theta;
  int n_chains = 0;
  long n_kept = 0;
  int dim = 0;

  const int* sample(int chain, long t) const {
    return theta.data() + (static_cast<std::size_t>(chain) * n_kept + t) * dim;
  }
  long total() const { return static_cast<long>(n_chains) * n_kept; }
};

// CSV: header "chain_id,step,t0,...,t{d-1}"; step is the absolute chain step
// the sample was kept at.
void write_samples_csv(const std::string& path, const SampleSet& s, int thin);

// Binary: magic "DFSB", version u32, n_chains u32, n_kept u32, dim u32,
// then row-major little-endian i32.
void write_samples_bin(const std::string& path, const SampleSet& s);
SampleSet read_samples_bin(const std::string& path);

}  // namespace discflow::harness
