#pragma once

#include <span>

#include "adasample/batch_stats.hpp"
#include "adasample/objective.hpp"
#include "adasample/types.hpp"

namespace adasample {

struct LineSearchConfig {
  double l0 = 1.0;            // initial Lipschitz estimate for the first iteration
  double eta = 1.5;           // growth factor per backtrack
  int max_backtracks = 60;    // ~1.5^60 of dynamic range
};

struct LineSearchResult {
  double l_k = 0.0;        // accepted Lipschitz estimate
  double alpha_k = 0.0;    // 1 / l_k
  double zeta_k = 0.0;     // contraction applied to l_prev before the search
  int backtracks = 0;      // growth steps taken
  int function_evals = 0;  // batch objective evaluations: backtracks + 2
};

// Variance-aware contraction: with a = var_grad / (|S| ||g||^2) + 1, returns
// zeta = max(1, 2/a), in [1, 2]. Noisy batches (large a) keep the previous
// estimate; exact batches halve it. Pre: stats computed with the batch mean
// as pivot.
double contraction_factor(const BatchStats& stats);

// Backtracking sufficient-decrease search along -g from x over the batch:
// starts at L = l_prev / zeta and multiplies by eta until
//   F_S(x - g/L) <= F_S(x) - ||g||^2 / (2L),
// accepting on equality. Non-finite trial values count as insufficient
// decrease. Throws LineSearchError after max_backtracks growth steps and
// ConfigError for l_prev <= 0 or a degenerate batch mean.
LineSearchResult backtrack(const ObjectiveSpec& spec, const Dataset& data,
                           const Vector& x, const GradientBundle& bundle,
                           std::span<const Index> batch, double l_prev,
                           const LineSearchConfig& config);

}  // namespace adasample
