#pragma once

#include <span>

#include "adasample/dataset.hpp"
#include "adasample/types.hpp"

namespace adasample {

enum class ObjectiveKind { logistic_l2, mean_square_centers };

// Finite-sum objective R(x) = (1/N) sum_i F_i(x).
//  logistic_l2:          F_i(x) = log(1 + exp(-z_i x.y_i)) + (lambda/2)||x||^2
//  mean_square_centers:  F_i(x) = (1/2)||x - c_i||^2
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::logistic_l2;
  double lambda = 0.0;  // l2 strength, logistic only
  RowMatrix centers;    // mean_square_centers only, one row per sample

  static ObjectiveSpec logistic(double lambda);
  static ObjectiveSpec mean_square(RowMatrix centers);
};

// Per-sample gradients of one batch plus their mean. per_sample row j is the
// gradient at sample batch[j].
struct GradientBundle {
  RowMatrix per_sample;
  Vector batch_mean;
};

// Dataset whose feature rows are the centers (labels all +1); lets the
// quadratic objective run through the same sampling machinery.
Dataset dataset_from_centers(const RowMatrix& centers);

double per_sample_value(const ObjectiveSpec& spec, const Dataset& data,
                        const Vector& x, Index i);
Vector per_sample_gradient(const ObjectiveSpec& spec, const Dataset& data,
                           const Vector& x, Index i);

double batch_value(const ObjectiveSpec& spec, const Dataset& data, const Vector& x,
                   std::span<const Index> batch);
GradientBundle batch_gradient(const ObjectiveSpec& spec, const Dataset& data,
                              const Vector& x, std::span<const Index> batch);

// Full-dataset value / gradient; identical accumulation order to the batch
// ops over {0..N-1}, so the results agree bitwise with those.
double full_value(const ObjectiveSpec& spec, const Dataset& data, const Vector& x);
Vector full_gradient(const ObjectiveSpec& spec, const Dataset& data, const Vector& x);

// Max relative mismatch between the analytic full gradient and a midpoint
// finite difference of full_value, over all coordinates.
double finite_difference_check(const ObjectiveSpec& spec, const Dataset& data,
                               const Vector& x, double h = 1e-6);

namespace detail {
// Validates spec/dataset consistency and the iterate once; batch loops then
// use the unchecked row evaluation below.
void check_eval_inputs(const ObjectiveSpec& spec, const Dataset& data, const Vector& x);
// Per-sample gradient into out (d entries); no argument validation.
void gradient_row_unchecked(const ObjectiveSpec& spec, const Dataset& data,
                            const Vector& x, Index i, double* out);
}  // namespace detail

// Serial reference instantiations of the batch kernels, kept for tests and
// the kernel benchmark; contracts match the functions above bitwise.
namespace serial {
double batch_value(const ObjectiveSpec& spec, const Dataset& data, const Vector& x,
                   std::span<const Index> batch);
GradientBundle batch_gradient(const ObjectiveSpec& spec, const Dataset& data,
                              const Vector& x, std::span<const Index> batch);
Vector full_gradient(const ObjectiveSpec& spec, const Dataset& data, const Vector& x);
}  // namespace serial

}  // namespace adasample
