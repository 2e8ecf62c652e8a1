#include "adasample/objective.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "adasample/errors.hpp"
#include "adasample/kernels.hpp"

namespace adasample {
namespace {

#ifdef _OPENMP
constexpr bool kPar = true;
#else
constexpr bool kPar = false;
#endif

/* log(1 + exp(-t)) without overflow on either tail */
double log1p_exp_neg(double t) {
  return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

/* 1 / (1 + exp(-u)), evaluated on the non-overflowing branch */
double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

void check_consistent(const ObjectiveSpec& spec, const Dataset& data) {
  if (spec.kind == ObjectiveKind::logistic_l2) {
    if (!(spec.lambda >= 0.0) || !std::isfinite(spec.lambda))
      throw ConfigError("logistic_l2 needs lambda >= 0");
  } else {
    if (spec.centers.rows() != data.n_samples() ||
        spec.centers.cols() != data.n_features())
      throw ConfigError("centers shape does not match the dataset");
  }
}

void check_x(const Vector& x, Index d) {
  if (x.size() != d) throw ConfigError("iterate dimension does not match the dataset");
  if (!x.allFinite()) throw ConfigError("non-finite iterate");
}

void check_index(Index i, Index n) {
  if (i < 0 || i >= n)
    throw ConfigError("sample index " + std::to_string(i) + " out of range");
}

// xsq = ||x||^2, passed in so batch loops pay for it once.
double value_at(const ObjectiveSpec& spec, const Dataset& data, const Vector& x,
                double xsq, Index i) {
  if (spec.kind == ObjectiveKind::logistic_l2)
    return log1p_exp_neg(data.label(i) * data.dot(i, x)) + 0.5 * spec.lambda * xsq;
  const double* c = spec.centers.data() + i * spec.centers.cols();
  double s = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    const double dj = x(j) - c[j];
    s += dj * dj;
  }
  return 0.5 * s;
}

// Writes the gradient of F_i at x into out (d entries). Shared by every
// evaluation path so all of them produce identical doubles.
void gradient_row(const ObjectiveSpec& spec, const Dataset& data, const Vector& x,
                  Index i, double* out) {
  const Index d = x.size();
  if (spec.kind == ObjectiveKind::logistic_l2) {
    const double z = data.label(i);
    const double c = -z * sigmoid(-z * data.dot(i, x));
    for (Index j = 0; j < d; ++j) out[j] = spec.lambda * x(j);
    data.add_scaled_row(i, c, out);
    return;
  }
  const double* cr = spec.centers.data() + i * spec.centers.cols();
  for (Index j = 0; j < d; ++j) out[j] = x(j) - cr[j];
}

// idx == nullptr runs over samples 0..m-1 directly (the full dataset).
template <bool Parallel>
double batch_value_impl(const ObjectiveSpec& spec, const Dataset& data,
                        const Vector& x, const Index* idx, Index m) {
  const double xsq = x.squaredNorm();
  std::vector<double> vals(static_cast<std::size_t>(m));
  kernels::for_each_chunk<Parallel>(m, [&](std::ptrdiff_t, std::ptrdiff_t b,
                                           std::ptrdiff_t e) {
    for (std::ptrdiff_t i = b; i < e; ++i)
      vals[i] = value_at(spec, data, x, xsq, idx ? idx[i] : i);
  });
  return kernels::sum<Parallel>(vals.data(), m) / static_cast<double>(m);
}

template <bool Parallel>
void mean_gradient_impl(const ObjectiveSpec& spec, const Dataset& data,
                        const Vector& x, const Index* idx, Index m, Vector& out) {
  const Index d = data.n_features();
  const std::ptrdiff_t nc = kernels::chunk_count(m);
  std::vector<double> partial(static_cast<std::size_t>(nc) * d, 0.0);
  kernels::for_each_chunk<Parallel>(m, [&](std::ptrdiff_t c, std::ptrdiff_t b,
                                           std::ptrdiff_t e) {
    std::vector<double> row(static_cast<std::size_t>(d));
    double* acc = partial.data() + c * d;
    for (std::ptrdiff_t i = b; i < e; ++i) {
      gradient_row(spec, data, x, idx ? idx[i] : i, row.data());
      for (Index j = 0; j < d; ++j) acc[j] += row[j];
    }
  });
  out.setZero(d);
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const double* acc = partial.data() + c * d;
    for (Index j = 0; j < d; ++j) out(j) += acc[j];
  }
  out /= static_cast<double>(m);
}

template <bool Parallel>
GradientBundle batch_gradient_impl(const ObjectiveSpec& spec, const Dataset& data,
                                   const Vector& x, const Index* idx, Index m) {
  const Index d = data.n_features();
  GradientBundle bundle;
  bundle.per_sample.resize(m, d);
  double* rows = bundle.per_sample.data();
  kernels::for_each_chunk<Parallel>(m, [&](std::ptrdiff_t, std::ptrdiff_t b,
                                           std::ptrdiff_t e) {
    for (std::ptrdiff_t i = b; i < e; ++i)
      gradient_row(spec, data, x, idx ? idx[i] : i, rows + i * d);
  });
  bundle.batch_mean.resize(d);
  kernels::row_sum<Parallel>(rows, m, d, bundle.batch_mean.data());
  bundle.batch_mean /= static_cast<double>(m);
  return bundle;
}

const Index* checked_batch(const ObjectiveSpec& spec, const Dataset& data,
                           const Vector& x, std::span<const Index> batch) {
  check_consistent(spec, data);
  check_x(x, data.n_features());
  if (batch.empty()) throw ConfigError("empty batch");
  for (Index i : batch) check_index(i, data.n_samples());
  return batch.data();
}

}  // namespace

ObjectiveSpec ObjectiveSpec::logistic(double lambda) {
  ObjectiveSpec s;
  s.kind = ObjectiveKind::logistic_l2;
  s.lambda = lambda;
  return s;
}

ObjectiveSpec ObjectiveSpec::mean_square(RowMatrix centers) {
  ObjectiveSpec s;
  s.kind = ObjectiveKind::mean_square_centers;
  s.centers = std::move(centers);
  return s;
}

Dataset dataset_from_centers(const RowMatrix& centers) {
  return Dataset::dense(centers, Vector::Ones(centers.rows()));
}

double per_sample_value(const ObjectiveSpec& spec, const Dataset& data,
                        const Vector& x, Index i) {
  check_consistent(spec, data);
  check_x(x, data.n_features());
  check_index(i, data.n_samples());
  return value_at(spec, data, x, x.squaredNorm(), i);
}

Vector per_sample_gradient(const ObjectiveSpec& spec, const Dataset& data,
                           const Vector& x, Index i) {
  check_consistent(spec, data);
  check_x(x, data.n_features());
  check_index(i, data.n_samples());
  Vector g(data.n_features());
  gradient_row(spec, data, x, i, g.data());
  return g;
}

double batch_value(const ObjectiveSpec& spec, const Dataset& data, const Vector& x,
                   std::span<const Index> batch) {
  const Index* idx = checked_batch(spec, data, x, batch);
  return batch_value_impl<kPar>(spec, data, x, idx, batch.size());
}

GradientBundle batch_gradient(const ObjectiveSpec& spec, const Dataset& data,
                              const Vector& x, std::span<const Index> batch) {
  const Index* idx = checked_batch(spec, data, x, batch);
  return batch_gradient_impl<kPar>(spec, data, x, idx, batch.size());
}

double full_value(const ObjectiveSpec& spec, const Dataset& data, const Vector& x) {
  check_consistent(spec, data);
  check_x(x, data.n_features());
  return batch_value_impl<kPar>(spec, data, x, nullptr, data.n_samples());
}

Vector full_gradient(const ObjectiveSpec& spec, const Dataset& data, const Vector& x) {
  check_consistent(spec, data);
  check_x(x, data.n_features());
  Vector g;
  mean_gradient_impl<kPar>(spec, data, x, nullptr, data.n_samples(), g);
  return g;
}

double finite_difference_check(const ObjectiveSpec& spec, const Dataset& data,
                               const Vector& x, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  const Vector g = full_gradient(spec, data, x);
  const double scale = std::max(1.0, g.lpNorm<Eigen::Infinity>());
  Vector xt = x;
  double worst = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    xt(j) = x(j) + h;
    const double fp = full_value(spec, data, xt);
    xt(j) = x(j) - h;
    const double fm = full_value(spec, data, xt);
    xt(j) = x(j);
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g(j)) / scale);
  }
  return worst;
}

namespace detail {

void check_eval_inputs(const ObjectiveSpec& spec, const Dataset& data, const Vector& x) {
  check_consistent(spec, data);
  check_x(x, data.n_features());
}

void gradient_row_unchecked(const ObjectiveSpec& spec, const Dataset& data,
                            const Vector& x, Index i, double* out) {
  gradient_row(spec, data, x, i, out);
}

}  // namespace detail

namespace serial {

double batch_value(const ObjectiveSpec& spec, const Dataset& data, const Vector& x,
                   std::span<const Index> batch) {
  const Index* idx = checked_batch(spec, data, x, batch);
  return batch_value_impl<false>(spec, data, x, idx, batch.size());
}

GradientBundle batch_gradient(const ObjectiveSpec& spec, const Dataset& data,
                              const Vector& x, std::span<const Index> batch) {
  const Index* idx = checked_batch(spec, data, x, batch);
  return batch_gradient_impl<false>(spec, data, x, idx, batch.size());
}

Vector full_gradient(const ObjectiveSpec& spec, const Dataset& data, const Vector& x) {
  check_consistent(spec, data);
  check_x(x, data.n_features());
  Vector g;
  mean_gradient_impl<false>(spec, data, x, nullptr, data.n_samples(), g);
  return g;
}

}  // namespace serial

}  // namespace adasample
