#pragma once

#include <stdexcept>
#include <string>

namespace discflow {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
// ConfigError -> 2, NumericError/DimensionError/DomainError -> 3, IoError/FormatError -> 4.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace discflow
