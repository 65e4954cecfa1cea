#pragma once

#include <string>
#include <vector>

#include "discflow/numcore/mat.hpp"

namespace discflow::targets {

// Tabular dataset: header row required, label column named "label",
// remaining columns numeric features. Labels are remapped to 0..C-1 in
// sorted order of the distinct raw values.
struct LabeledTable {
  numcore::Mat x;
  std::vector<int> labels;
  int n_classes = 0;
};

LabeledTable load_labeled_csv(const std::string& path);

}  // namespace discflow::targets
