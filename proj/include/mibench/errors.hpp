#pragma once

#include <stdexcept>
#include <string>

namespace mibench {

// Error taxonomy mirrors the CLI exit-code contract:
// ConfigError -> 2, NumericError/ShapeError -> 3, FormatError/IoError -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mibench
