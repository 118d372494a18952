#pragma once

#include <cstdint>
#include <vector>

#include "mibench/matrix.hpp"

namespace mibench {

// K paired observations plus the hidden class bits used to build them.
// The bit arrays are audit metadata and are never shown to critics.
struct PairBatch {
  Matrix x;
  Matrix y;
  Index d_s = 0;
  std::vector<std::uint8_t> class_bits_x;  // K * d_s, row-major
  std::vector<std::uint8_t> class_bits_y;

  Index k() const { return x.rows(); }
};

// Expand rows to target_dim by appending copies of the leading coordinates
// (cyclically if more than one full copy is needed). No information is added
// or lost; truncating back to the source width recovers the input exactly.
inline Matrix pad_redundant(const Matrix& batch, Index target_dim) {
  const Index d = batch.cols();
  if (target_dim < d) throw ConfigError("pad_redundant: target dimension smaller than source");
  if (target_dim == d) return batch;
  Matrix out(batch.rows(), target_dim);
  out.leftCols(d) = batch;
  Index filled = d;
  while (filled < target_dim) {
    const Index chunk = std::min(d, target_dim - filled);
    out.middleCols(filled, chunk) = batch.leftCols(chunk);
    filled += chunk;
  }
  return out;
}

}  // namespace mibench
