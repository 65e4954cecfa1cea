#include "discflow/harness/metadata.hpp"

#include <fstream>

#include <json.hpp>

namespace discflow::harness {

void write_metadata(const std::string& path, const std::string& command, const Config& cfg,
                    std::uint64_t seed, double desk_scale, const RunTimings& timings,
                    const std::string& extra_json) {
  nlohmann::json j;
  const std::string canonical = cfg.canonical_text();
  j["command"] = command;
  j["version"] = kVersionString;
  j["config_hash"] = hash_hex(canonical);
  j["config_text"] = canonical;
  j["seed"] = seed;
  j["desk_scale"] = desk_scale;
  j["timings"]["train_seconds"] = timings.train_seconds;
  j["timings"]["sample_seconds"] = timings.sample_seconds;
  j["extra"] = nlohmann::json::parse(extra_json);
  std::ofstream os(path);
  if (!os) throw IoError("write_metadata: cannot open " + path);
  os << j.dump(2) << "\n";
}

double read_train_seconds(const std::string& path) {
  std::ifstream is(path);
  if (!is) return 0.0;
  try {
    nlohmann::json j;
    is >> j;
    return j.at("timings").at("train_seconds").get<double>();
  } catch (const std::exception&) {
    return 0.0;
  }
}

}  // namespace discflow::harness
