#include "adasample/batch_stats.hpp"

#include <cmath>
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

// One chunked pass over m gradient rows: inner products with the pivot into
// t, plus the summed squared orthogonal residuals (vs the pivot) and squared
// deviations (vs center). The residual is formed explicitly rather than via
// the Pythagorean shortcut so it is exact and nonnegative; the aggregated
// identity then stays a checkable property instead of a tautology.
template <bool Parallel>
void stats_pass(const double* rows, Index m, Index d, const double* pivot,
                double pnsq, const double* center, std::vector<double>& t,
                double& orth_sum, double& dev_sum) {
  const std::ptrdiff_t nc = kernels::chunk_count(m);
  std::vector<double> p_orth(nc, 0.0), p_dev(nc, 0.0);
  kernels::for_each_chunk<Parallel>(
      m, [&](std::ptrdiff_t c, std::ptrdiff_t b, std::ptrdiff_t e) {
        double so = 0.0, sd = 0.0;
        for (std::ptrdiff_t i = b; i < e; ++i) {
          const double* g = rows + i * d;
          double ti = 0.0;
          for (Index j = 0; j < d; ++j) ti += g[j] * pivot[j];
          t[i] = ti;
          const double a = ti / pnsq;
          double o = 0.0, dv = 0.0;
          for (Index j = 0; j < d; ++j) {
            const double rj = g[j] - a * pivot[j];
            o += rj * rj;
            const double cj = g[j] - center[j];
            dv += cj * cj;
          }
          so += o;
          sd += dv;
        }
        p_orth[c] = so;
        p_dev[c] = sd;
      });
  orth_sum = 0.0;
  dev_sum = 0.0;
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    orth_sum += p_orth[c];
    dev_sum += p_dev[c];
  }
}

double checked_pivot_norm_sq(const Vector& pivot, Index d) {
  if (pivot.size() != d) throw ConfigError("pivot dimension mismatch");
  if (!pivot.allFinite()) throw ConfigError("non-finite pivot");
  const double pnsq = pivot.squaredNorm();
  if (pnsq == 0.0) throw ConfigError("degenerate pivot (zero norm)");
  return pnsq;
}

template <bool Parallel>
BatchStats batch_stats_impl(const GradientBundle& bundle, const Vector& pivot) {
  const Index m = bundle.per_sample.rows();
  const Index d = bundle.per_sample.cols();
  if (m < 2) throw ConfigError("batch variance needs at least two samples");
  if (bundle.batch_mean.size() != d) throw ConfigError("bundle mean dimension mismatch");
  const double pnsq = checked_pivot_norm_sq(pivot, d);

  std::vector<double> t(static_cast<std::size_t>(m));
  double orth_sum = 0.0, dev_sum = 0.0;
  stats_pass<Parallel>(bundle.per_sample.data(), m, d, pivot.data(), pnsq,
                       bundle.batch_mean.data(), t, orth_sum, dev_sum);
  const double tbar = kernels::sum<Parallel>(t.data(), m) / static_cast<double>(m);
  const double inner_sum = kernels::centered_square_sum<Parallel>(t.data(), m, tbar);

  BatchStats s;
  s.sample_size = m;
  s.pivot_norm_sq = pnsq;
  s.var_inner = inner_sum / static_cast<double>(m - 1);
  s.var_orth = orth_sum / static_cast<double>(m - 1);
  s.var_grad = dev_sum / static_cast<double>(m - 1);
  return s;
}

}  // namespace

BatchStats compute_batch_stats(const GradientBundle& bundle, const Vector& pivot) {
  return batch_stats_impl<kPar>(bundle, pivot);
}

namespace serial {
BatchStats compute_batch_stats(const GradientBundle& bundle, const Vector& pivot) {
  return batch_stats_impl<false>(bundle, pivot);
}
}  // namespace serial

BatchStats population_stats(const ObjectiveSpec& spec, const Dataset& data,
                            const Vector& x, const Vector& pivot) {
  detail::check_eval_inputs(spec, data, x);
  const Index n = data.n_samples();
  const Index d = data.n_features();
  const double pnsq = checked_pivot_norm_sq(pivot, d);

  // Gradients are recomputed per chunk instead of materialized; the per-row
  // arithmetic and the accumulation order match the bundle path exactly.
  std::vector<double> t(static_cast<std::size_t>(n));
  const std::ptrdiff_t nc = kernels::chunk_count(n);
  std::vector<double> p_orth(nc, 0.0), p_dev(nc, 0.0);
  kernels::for_each_chunk<kPar>(
      n, [&](std::ptrdiff_t c, std::ptrdiff_t b, std::ptrdiff_t e) {
        std::vector<double> row(static_cast<std::size_t>(d));
        double so = 0.0, sd = 0.0;
        for (std::ptrdiff_t i = b; i < e; ++i) {
          detail::gradient_row_unchecked(spec, data, x, i, row.data());
          double ti = 0.0;
          for (Index j = 0; j < d; ++j) ti += row[j] * pivot(j);
          t[i] = ti;
          const double a = ti / pnsq;
          double o = 0.0, dv = 0.0;
          for (Index j = 0; j < d; ++j) {
            const double rj = row[j] - a * pivot(j);
            o += rj * rj;
            const double cj = row[j] - pivot(j);
            dv += cj * cj;
          }
          so += o;
          sd += dv;
        }
        p_orth[c] = so;
        p_dev[c] = sd;
      });
  double orth_sum = 0.0, dev_sum = 0.0;
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    orth_sum += p_orth[c];
    dev_sum += p_dev[c];
  }
  const double tbar = kernels::sum<kPar>(t.data(), n) / static_cast<double>(n);
  const double inner_sum = kernels::centered_square_sum<kPar>(t.data(), n, tbar);

  BatchStats s;
  s.sample_size = n;
  s.pivot_norm_sq = pnsq;
  s.var_inner = inner_sum / static_cast<double>(n);
  s.var_orth = orth_sum / static_cast<double>(n);
  s.var_grad = dev_sum / static_cast<double>(n);
  return s;
}

}  // namespace adasample
