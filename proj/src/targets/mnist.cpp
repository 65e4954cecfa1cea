#include "discflow/targets/mnist.hpp"

#include <fstream>

#include "discflow/errors.hpp"

namespace discflow::targets {

namespace {

std::uint32_t read_be_u32(std::istream& is) {
  std::uint8_t b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (is.gcount() != 4) throw FormatError("IDX: truncated header");
  return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
         (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
}

}  // namespace

IdxImages load_mnist_idx(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_mnist_idx: cannot open " + path);
  if (read_be_u32(is) != 0x00000803u) throw FormatError("load_mnist_idx: bad magic");
  IdxImages img;
  img.count = static_cast<int>(read_be_u32(is));
  img.rows = static_cast<int>(read_be_u32(is));
  img.cols = static_cast<int>(read_be_u32(is));
  if (img.count < 0 || img.rows <= 0 || img.cols <= 0) {
    throw FormatError("load_mnist_idx: bad dimensions");
  }
  const std::size_t n =
      static_cast<std::size_t>(img.count) * static_cast<std::size_t>(img.rows) * img.cols;
  img.pixels.resize(n);
  is.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
  if (is.gcount() != static_cast<std::streamsize>(n)) {
    throw FormatError("load_mnist_idx: truncated pixel data");
  }
  return img;
}

std::vector<int> load_mnist_labels(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_mnist_labels: cannot open " + path);
  if (read_be_u32(is) != 0x00000801u) throw FormatError("load_mnist_labels: bad magic");
  const auto count = static_cast<std::size_t>(read_be_u32(is));
  std::vector<std::uint8_t> raw(count);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
  if (is.gcount() != static_cast<std::streamsize>(count)) {
    throw FormatError("load_mnist_labels: truncated label data");
  }
  return {raw.begin(), raw.end()};
}

std::vector<int> binarize(const std::uint8_t* pixels, int n, double tau) {
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = (static_cast<double>(pixels[i]) / 255.0 >= tau) ? 1 : 0;
  }
  return out;
}

}  // namespace discflow::targets
