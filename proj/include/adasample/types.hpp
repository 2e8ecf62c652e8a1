#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace adasample {

using Vector = Eigen::VectorXd;
// Per-sample data is always addressed row-wise, so keep it row-major.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = std::int64_t;

// Iterates or batch objective values beyond this magnitude abort the run.
inline constexpr double kDivergenceCap = 1e100;

// Batch-mean gradients at or below this norm are treated as degenerate pivots.
inline constexpr double kDegeneratePivot = 1e-14;

}  // namespace adasample
