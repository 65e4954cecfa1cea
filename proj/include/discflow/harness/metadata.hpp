#pragma once

#include <string>

#include "discflow/harness/config.hpp"

namespace discflow::harness {

inline constexpr const char* kVersionString = "discflow-0.1.0";

struct RunTimings {
  double train_seconds = 0.0;
  double sample_seconds = 0.0;
};

// Every command writes one of these next to its outputs: config hash, seed,
// version, and the timing breakdown backing the ESS/min contract.
void write_metadata(const std::string& path, const std::string& command, const Config& cfg,
                    std::uint64_t seed, double desk_scale, const RunTimings& timings,
                    const std::string& extra_json = "{}");

// Reads train_seconds back from a metadata file; 0 when absent/unreadable.
double read_train_seconds(const std::string& path);

}  // namespace discflow::harness
