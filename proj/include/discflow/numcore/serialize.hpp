#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "discflow/numcore/mlp.hpp"

namespace discflow::numcore {

// Little-endian primitives over iostreams; the layer on which all binary
// file formats in this project are built.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& os) : os_(os) {}
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v);
  void f64(double v);
  void bytes(const void* p, std::size_t n);

 private:
  std::ostream& os_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& is) : is_(is) {}
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32();
  double f64();
  void bytes(void* p, std::size_t n);

 private:
  std::istream& is_;
};

// Versioned flat parameter block: magic "DFMP", version u32, layer count,
// per-layer (in, out) dims, then row-major weights and biases as f64 LE.
void write_mlp(BinaryWriter& w, const Mlp& m);
Mlp read_mlp(BinaryReader& r);

void save_mlp(const std::string& path, const Mlp& m);
Mlp load_mlp(const std::string& path);

}  // namespace discflow::numcore
