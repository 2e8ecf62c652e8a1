#include "adasample/control.hpp"

#include <algorithm>
#include <cmath>

#include "adasample/errors.hpp"

namespace adasample {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::keep: return "keep";
    case Branch::grow_main: return "grow_main";
    case Branch::grow_avg: return "grow_avg";
    case Branch::degenerate_grow: return "degenerate_grow";
    case Branch::degenerate_full: return "degenerate_full";
    case Branch::exact: return "exact";
  }
  return "unknown";
}

double gamma_from(int r, double omega) {
  if (r < 1) throw ConfigError("running-average window must be >= 1");
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
  const double inv_sqrt_r = 1.0 / std::sqrt(static_cast<double>(r));
  return inv_sqrt_r + (1.0 - inv_sqrt_r) / omega;
}

void ControlConfig::validate(Index n_samples) const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be positive");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("nu must be positive");
  if (r < 1) throw ConfigError("r must be >= 1");
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (s0 < 2) throw ConfigError("initial sample size must be >= 2");
  if (s0 > n_samples) throw ConfigError("initial sample size exceeds the dataset");
}

TestOutcome inner_product_test(const BatchStats& stats, double theta) {
  TestOutcome t;
  t.which = TestWhich::inner_product;
  t.lhs = stats.var_inner / static_cast<double>(stats.sample_size);
  t.rhs = theta * theta * stats.pivot_norm_sq * stats.pivot_norm_sq;
  t.passed = t.lhs <= t.rhs;
  return t;
}

TestOutcome orthogonality_test(const BatchStats& stats, double nu) {
  TestOutcome t;
  t.which = TestWhich::orthogonality;
  t.lhs = stats.var_orth / static_cast<double>(stats.sample_size);
  t.rhs = nu * nu * stats.pivot_norm_sq;
  t.passed = t.lhs <= t.rhs;
  return t;
}

TestOutcome norm_test(const BatchStats& stats, double theta) {
  TestOutcome t;
  t.which = TestWhich::norm;
  t.lhs = stats.var_grad / static_cast<double>(stats.sample_size);
  t.rhs = theta * theta * stats.pivot_norm_sq;
  t.passed = t.lhs <= t.rhs;
  return t;
}

namespace {

// ceil(raw), clamped to [current+1, n]; non-finite or oversized raw values
// saturate at the full dataset.
Index clamp_size(double raw, Index current, Index n) {
  if (current >= n) return n;
  Index want;
  if (!std::isfinite(raw) || raw >= static_cast<double>(n)) {
    want = n;
  } else {
    want = static_cast<Index>(std::ceil(raw));
  }
  return std::clamp(want, current + 1, n);
}

}  // namespace

Index next_sample_size(const BatchStats& stats, double theta, double nu,
                       Index current, Index n) {
  const double pnsq = stats.pivot_norm_sq;
  const double raw = std::max(stats.var_inner / (theta * theta * pnsq * pnsq),
                              stats.var_orth / (nu * nu * pnsq));
  return clamp_size(raw, current, n);
}

Index next_sample_size_norm(const BatchStats& stats, double theta,
                            Index current, Index n) {
  const double raw = stats.var_grad / (theta * theta * stats.pivot_norm_sq);
  return clamp_size(raw, current, n);
}

Vector running_average(const ControlState& state, int r) {
  if (static_cast<int>(state.recent.size()) != r)
    throw ConfigError("running average needs exactly r buffered gradients");
  Vector avg = Vector::Zero(state.recent.front().second.size());
  for (const auto& [k, g] : state.recent) avg += g;  // oldest to newest
  return avg / static_cast<double>(r);
}

bool noisy_regime_check(const Vector& g_avg, const Vector& g_batch, double gamma) {
  return g_avg.norm() < gamma * g_batch.norm();
}

ControlDecision controller_step(ControlState& state, const GradientBundle& bundle,
                                const ControlConfig& config, Index n, Index iteration) {
  ControlDecision d;
  d.new_size = state.current_size;

  const Vector& g = bundle.batch_mean;
  if (g.norm() <= kDegeneratePivot) {
    // Too little signal to test against; either the full dataset already
    // agrees the gradient vanished, or sampling noise produced a freak
    // cancellation and the sample must grow.
    if (state.current_size >= n) {
      d.branch = Branch::degenerate_full;
      d.full_batch_converged = true;
    } else {
      d.branch = Branch::degenerate_grow;
      d.new_size = std::min(n, state.current_size * 2);
    }
  } else {
    const BatchStats stats = compute_batch_stats(bundle, g);
    bool grow = false;
    if (config.test_kind == SampleTest::norm) {
      const TestOutcome t = norm_test(stats, config.theta);
      d.tests.push_back(t);
      if (!t.passed) {
        grow = true;
        d.new_size = next_sample_size_norm(stats, config.theta, state.current_size, n);
      }
    } else {
      const TestOutcome ip = inner_product_test(stats, config.theta);
      const TestOutcome orth = orthogonality_test(stats, config.nu);
      d.tests.push_back(ip);
      d.tests.push_back(orth);
      if (!ip.passed || !orth.passed) {
        grow = true;
        d.new_size = next_sample_size(stats, config.theta, config.nu,
                                      state.current_size, n);
      }
    }
    if (grow) {
      d.branch = Branch::grow_main;
    } else {
      // Size stands this iteration: remember the gradient, and once the size
      // has been flat for r iterations compare the averaged direction against
      // the latest one. A much shorter average means the individual batch
      // gradients mostly cancel, so the per-batch tests were too easy to pass
      // and the decision is retried with the average as pivot.
      state.recent.emplace_back(iteration, g);
      if (static_cast<int>(state.recent.size()) > config.r) state.recent.pop_front();
      state.stagnation_count += 1;
      if (static_cast<int>(state.recent.size()) == config.r &&
          state.stagnation_count >= config.r) {
        const Vector g_avg = running_average(state, config.r);
        if (noisy_regime_check(g_avg, g, config.gamma)) {
          d.used_running_average = true;
          if (g_avg.norm() <= kDegeneratePivot) {
            // Averaged-out gradient: no usable pivot, take the whole dataset.
            d.branch = Branch::grow_avg;
            d.new_size = n;
          } else {
            const BatchStats avg_stats = compute_batch_stats(bundle, g_avg);
            bool avg_grow = false;
            if (config.test_kind == SampleTest::norm) {
              const TestOutcome t = norm_test(avg_stats, config.theta);
              d.tests.push_back(t);
              if (!t.passed) {
                avg_grow = true;
                d.new_size = next_sample_size_norm(avg_stats, config.theta,
                                                   state.current_size, n);
              }
            } else {
              const TestOutcome ip = inner_product_test(avg_stats, config.theta);
              const TestOutcome orth = orthogonality_test(avg_stats, config.nu);
              d.tests.push_back(ip);
              d.tests.push_back(orth);
              if (!ip.passed || !orth.passed) {
                avg_grow = true;
                d.new_size = next_sample_size(avg_stats, config.theta, config.nu,
                                              state.current_size, n);
              }
            }
            if (avg_grow) d.branch = Branch::grow_avg;
          }
        }
      }
    }
  }

  if (d.new_size != state.current_size) {
    state.current_size = d.new_size;
    state.recent.clear();
    state.stagnation_count = 0;
  }
  return d;
}

}  // namespace adasample
