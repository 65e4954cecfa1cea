#include "discflow/harness/samples_io.hpp"

#include <cstdio>
#include <fstream>

#include "discflow/errors.hpp"
#include "discflow/numcore/serialize.hpp"

namespace discflow::harness {

namespace {
constexpr std::uint32_t kMagic = 0x42534644u;  // "DFSB"
constexpr std::uint32_t kVersion = 1u;
}  // namespace

void write_samples_csv(const std::string& path, const SampleSet& s, int thin) {
  std::ofstream os(path);
  if (!os) throw IoError("write_samples_csv: cannot open " + path);
  os << "chain_id,step";
  for (int j = 0; j < s.dim; ++j) os << ",t" << j;
  os << "\n";
  for (int c = 0; c < s.n_chains; ++c) {
    for (long t = 0; t < s.n_kept; ++t) {
      os << c << "," << (t + 1) * static_cast<long>(thin);
      const int* row = s.sample(c, t);
      for (int j = 0; j < s.dim; ++j) os << "," << row[j];
      os << "\n";
    }
  }
  if (!os) throw IoError("write_samples_csv: write failed");
}

void write_samples_bin(const std::string& path, const SampleSet& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_samples_bin: cannot open " + path);
  numcore::BinaryWriter w(os);
  w.u32(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(s.n_chains));
  w.u32(static_cast<std::uint32_t>(s.n_kept));
  w.u32(static_cast<std::uint32_t>(s.dim));
  for (int v : s.theta) w.i32(v);
}

SampleSet read_samples_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_samples_bin: cannot open " + path);
  numcore::BinaryReader r(is);
  if (r.u32() != kMagic) throw FormatError("read_samples_bin: bad magic");
  if (r.u32() != kVersion) throw FormatError("read_samples_bin: unsupported version");
  SampleSet s;
  s.n_chains = static_cast<int>(r.u32());
  s.n_kept = static_cast<long>(r.u32());
  s.dim = static_cast<int>(r.u32());
  if (s.n_chains <= 0 || s.n_kept < 0 || s.dim <= 0) {
    throw FormatError("read_samples_bin: bad shape");
  }
  s.theta.resize(static_cast<std::size_t>(s.n_chains) * s.n_kept * s.dim);
  for (auto& v : s.theta) v = r.i32();
  return s;
}

}  // namespace discflow::harness
