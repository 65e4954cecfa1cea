#include "discflow/harness/pgm.hpp"

#include <fstream>

#include "discflow/errors.hpp"

namespace discflow::harness {

void write_pgm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("write_pgm: pixel count does not match the image shape");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_pgm: cannot open " + path);
  os << "P5\n" << width << " " << height << "\n255\n";
  os.write(reinterpret_cast<const char*>(pixels.data()),
           static_cast<std::streamsize>(pixels.size()));
  if (!os) throw IoError("write_pgm: write failed");
}

PgmImage read_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_pgm: cannot open " + path);
  std::string magic;
  is >> magic;
  if (magic != "P5") throw FormatError("read_pgm: not a P5 file");
  int w, h, maxval;
  is >> w >> h >> maxval;
  if (!is || w <= 0 || h <= 0 || maxval != 255) throw FormatError("read_pgm: bad header");
  is.get();  // single whitespace after the header
  PgmImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<std::size_t>(w) * h);
  is.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (is.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw FormatError("read_pgm: truncated pixel data");
  }
  return img;
}

}  // namespace discflow::harness
