#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "discflow/numcore/rng.hpp"

namespace discflow::targets {

// IDX image container (big-endian file format, magic 0x00000803).
struct IdxImages {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols

  const std::uint8_t* image(int i) const { return pixels.data() + static_cast<std::size_t>(i) * rows * cols; }
};

IdxImages load_mnist_idx(const std::string& path);
std::vector<int> load_mnist_labels(const std::string& path);  // magic 0x00000801

// Pixel intensity / 255 >= tau maps to 1, else 0.
std::vector<int> binarize(const std::uint8_t* pixels, int n, double tau = 0.5);

}  // namespace discflow::targets
