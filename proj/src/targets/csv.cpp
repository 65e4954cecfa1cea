#include "discflow/targets/csv.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "discflow/errors.hpp"

namespace discflow::targets {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // Trim surrounding whitespace.
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

LabeledTable load_labeled_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("load_labeled_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw FormatError("load_labeled_csv: empty file");
  const auto header = split_csv_line(line);
  int label_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "label") label_col = static_cast<int>(i);
  }
  if (label_col < 0) throw FormatError("load_labeled_csv: no column named 'label'");
  const int n_features = static_cast<int>(header.size()) - 1;
  if (n_features <= 0) throw FormatError("load_labeled_csv: no feature columns");

  std::vector<double> feats;
  std::vector<double> raw_labels;
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw FormatError("load_labeled_csv: row " + std::to_string(rows + 2) +
                        " has wrong cell count");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v;
      try {
        v = std::stod(cells[i]);
      } catch (const std::exception&) {
        throw FormatError("load_labeled_csv: non-numeric cell '" + cells[i] + "'");
      }
      if (static_cast<int>(i) == label_col) {
        raw_labels.push_back(v);
      } else {
        feats.push_back(v);
      }
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("load_labeled_csv: no data rows");

  std::vector<double> sorted = raw_labels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<double, int> remap;
  for (std::size_t i = 0; i < sorted.size(); ++i) remap[sorted[i]] = static_cast<int>(i);

  LabeledTable t;
  t.x = numcore::Mat(rows, n_features);
  t.x.a = std::move(feats);
  t.labels.reserve(rows);
  for (double v : raw_labels) t.labels.push_back(remap[v]);
  t.n_classes = static_cast<int>(sorted.size());
  return t;
}

}  // namespace discflow::targets
