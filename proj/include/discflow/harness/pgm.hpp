#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace discflow::harness {

// Binary (P5) PGM, 8-bit grayscale.
void write_pgm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& pixels);

struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

PgmImage read_pgm(const std::string& path);

}  // namespace discflow::harness
