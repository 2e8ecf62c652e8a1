#include "adasample/line_search.hpp"

#include <cmath>

#include "adasample/errors.hpp"

namespace adasample {

double contraction_factor(const BatchStats& stats) {
  const double a =
      stats.var_grad / (static_cast<double>(stats.sample_size) * stats.pivot_norm_sq) +
      1.0;
  return std::max(1.0, 2.0 / a);
}

LineSearchResult backtrack(const ObjectiveSpec& spec, const Dataset& data,
                           const Vector& x, const GradientBundle& bundle,
                           std::span<const Index> batch, double l_prev,
                           const LineSearchConfig& config) {
  if (!(l_prev > 0.0) || !std::isfinite(l_prev))
    throw ConfigError("line search needs a positive previous Lipschitz estimate");
  if (!(config.eta > 1.0)) throw ConfigError("line search growth factor must exceed 1");
  if (config.max_backtracks < 0) throw ConfigError("negative backtrack budget");

  // Degenerate batch mean propagates as a ConfigError from the stats pass.
  const BatchStats stats = compute_batch_stats(bundle, bundle.batch_mean);
  const double zeta = contraction_factor(stats);
  const double gsq = bundle.batch_mean.squaredNorm();
  const double f0 = batch_value(spec, data, x, batch);
  if (!std::isfinite(f0) || std::abs(f0) > kDivergenceCap)
    throw DivergenceError("batch objective out of range at the current iterate");

  double l = l_prev / zeta;
  int backtracks = 0;
  Vector trial(x.size());
  for (;;) {
    trial = x - bundle.batch_mean / l;
    const double f_new = batch_value(spec, data, trial, batch);
    // Non-finite trial values mean the step is far too long; treat them as
    // insufficient decrease so the estimate keeps growing.
    if (std::isfinite(f_new) && f_new <= f0 - gsq / (2.0 * l)) break;
    if (backtracks >= config.max_backtracks)
      throw LineSearchError("no sufficient decrease within the backtrack budget", l);
    l *= config.eta;
    ++backtracks;
  }

  LineSearchResult res;
  res.l_k = l;
  res.alpha_k = 1.0 / l;
  res.zeta_k = zeta;
  res.backtracks = backtracks;
  res.function_evals = backtracks + 2;
  return res;
}

}  // namespace adasample
