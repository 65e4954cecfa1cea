#include "discflow/numcore/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace discflow::numcore {

namespace {
constexpr std::uint32_t kMlpMagic = 0x504D4644u;  // "DFMP"
constexpr std::uint32_t kMlpVersion = 1u;
}  // namespace

void BinaryWriter::u8(std::uint8_t v) { bytes(&v, 1); }

void BinaryWriter::u32(std::uint32_t v) {
  std::uint8_t b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  bytes(b, 4);
}

void BinaryWriter::u64(std::uint64_t v) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  bytes(b, 8);
}

void BinaryWriter::i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::bytes(const void* p, std::size_t n) {
  os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!os_) throw IoError("BinaryWriter: write failed");
}

std::uint8_t BinaryReader::u8() {
  std::uint8_t v;
  bytes(&v, 1);
  return v;
}

std::uint32_t BinaryReader::u32() {
  std::uint8_t b[4];
  bytes(b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t BinaryReader::u64() {
  std::uint8_t b[8];
  bytes(b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::int32_t BinaryReader::i32() { return static_cast<std::int32_t>(u32()); }

double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

void BinaryReader::bytes(void* p, std::size_t n) {
  is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (is_.gcount() != static_cast<std::streamsize>(n)) {
    throw FormatError("BinaryReader: unexpected end of stream");
  }
}

void write_mlp(BinaryWriter& w, const Mlp& m) {
  w.u32(kMlpMagic);
  w.u32(kMlpVersion);
  w.u32(static_cast<std::uint32_t>(m.n_layers()));
  for (int l = 0; l < m.n_layers(); ++l) {
    w.u32(static_cast<std::uint32_t>(m.w[l].cols));
    w.u32(static_cast<std::uint32_t>(m.w[l].rows));
  }
  for (int l = 0; l < m.n_layers(); ++l) {
    for (double x : m.w[l].a) w.f64(x);
    for (double x : m.b[l]) w.f64(x);
  }
}

Mlp read_mlp(BinaryReader& r) {
  if (r.u32() != kMlpMagic) throw FormatError("read_mlp: bad magic");
  if (r.u32() != kMlpVersion) throw FormatError("read_mlp: unsupported version");
  const std::uint32_t layers = r.u32();
  if (layers == 0 || layers > 1024) throw FormatError("read_mlp: bad layer count");
  std::vector<int> dims;
  dims.reserve(layers + 1);
  for (std::uint32_t l = 0; l < layers; ++l) {
    const std::uint32_t in = r.u32();
    const std::uint32_t out = r.u32();
    if (out == 0 || in > (1u << 24) || out > (1u << 24)) {
      throw FormatError("read_mlp: bad layer dims");
    }
    if (l == 0) {
      dims.push_back(static_cast<int>(in));
    } else if (dims.back() != static_cast<int>(in)) {
      throw FormatError("read_mlp: inconsistent layer dims");
    }
    dims.push_back(static_cast<int>(out));
  }
  Mlp m = Mlp::make(dims);
  for (std::uint32_t l = 0; l < layers; ++l) {
    for (double& x : m.w[l].a) x = r.f64();
    for (double& x : m.b[l]) x = r.f64();
  }
  return m;
}

void save_mlp(const std::string& path, const Mlp& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_mlp: cannot open " + path);
  BinaryWriter w(os);
  write_mlp(w, m);
}

Mlp load_mlp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_mlp: cannot open " + path);
  BinaryReader r(is);
  return read_mlp(r);
}

}  // namespace discflow::numcore
