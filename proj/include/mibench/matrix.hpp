#pragma once

#include <Eigen/Dense>
#include <string>

#include "mibench/errors.hpp"

namespace mibench {

// Row-major 64-bit matrices throughout; the estimator math is exp/log heavy
// and 32-bit drift would show up in the acceptance tolerances.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
// Narrow storage for large sample banks; widened to double per batch.
using MatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

inline void require_shape(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

inline void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw NumericError(what + ": non-finite values");
}

inline void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw NumericError(what + ": non-finite value");
}

}  // namespace mibench
