#pragma once

#include "adasample/objective.hpp"
#include "adasample/types.hpp"

namespace adasample {

// Second-moment summary of a gradient batch against a pivot direction p:
//   var_inner: sample variance of the inner products g_i . p, centered at
//              their sample mean (= ||p||^2 when p is the batch mean)
//   var_orth:  mean squared orthogonal residual ||g_i - (g_i.p / ||p||^2) p||^2
//   var_grad:  sample variance of the gradients about the batch mean,
//              (1/(n-1)) sum ||g_i - g_bar||^2
// Sample statistics use divisor n-1; population_stats uses divisor N.
struct BatchStats {
  Index sample_size = 0;
  double pivot_norm_sq = 0.0;
  double var_inner = 0.0;
  double var_orth = 0.0;
  double var_grad = 0.0;
};

// Single pass over the bundle rows. Throws ConfigError for batches smaller
// than two samples or a pivot with exactly zero norm.
BatchStats compute_batch_stats(const GradientBundle& bundle, const Vector& pivot);

// Population counterpart over the whole dataset: divisor N, gradients centered
// at the full gradient. pivot is expected to be full_gradient(spec, data, x).
BatchStats population_stats(const ObjectiveSpec& spec, const Dataset& data,
                            const Vector& x, const Vector& pivot);

namespace serial {
BatchStats compute_batch_stats(const GradientBundle& bundle, const Vector& pivot);
}

}  // namespace adasample
