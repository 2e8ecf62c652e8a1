#include "adasample/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adasample/errors.hpp"
#include "adasample/oracle.hpp"
#include "adasample/sampling.hpp"

namespace adasample {

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::epoch_budget: return "epoch_budget";
    case StopReason::iteration_cap: return "iteration_cap";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_config(const RunConfig& cfg, Index n) {
  if (cfg.fixed_alpha.has_value() == cfg.line_search.has_value())
    throw ConfigError("exactly one of fixed_alpha and line_search must be set");
  if (cfg.fixed_alpha && (!(*cfg.fixed_alpha > 0.0) || !std::isfinite(*cfg.fixed_alpha)))
    throw ConfigError("fixed step length must be positive");
  if (cfg.line_search) {
    if (!(cfg.line_search->l0 > 0.0) || !std::isfinite(cfg.line_search->l0))
      throw ConfigError("initial Lipschitz estimate must be positive");
    if (!(cfg.line_search->eta > 1.0))
      throw ConfigError("line search growth factor must exceed 1");
    if (cfg.line_search->max_backtracks < 0)
      throw ConfigError("negative backtrack budget");
  }
  if (!(cfg.max_epochs > 0.0)) throw ConfigError("epoch budget must be positive");
  if (!(cfg.tol_grad_inf > 0.0)) throw ConfigError("gradient tolerance must be positive");
  if (cfg.max_iterations < 0) throw ConfigError("negative iteration cap");
  if (cfg.diagnostics_every < 1) throw ConfigError("diagnostics cadence must be >= 1");
  cfg.control.validate(n);
}

Index ceil_clamped(double raw, Index lo, Index hi) {
  if (!std::isfinite(raw) || raw >= static_cast<double>(hi)) return hi;
  return std::clamp(static_cast<Index>(std::ceil(raw)), lo, hi);
}

}  // namespace

RunResult run(const ObjectiveSpec& spec, const Dataset& data, const RunConfig& cfg) {
  const Index n = data.n_samples();
  const Index d = data.n_features();
  validate_config(cfg, n);

  Vector x;
  if (cfg.x0.size() == 0) {
    x = Vector::Zero(d);
  } else {
    if (cfg.x0.size() != d) throw ConfigError("x0 dimension does not match the dataset");
    if (!cfg.x0.allFinite()) throw ConfigError("non-finite x0");
    x = cfg.x0;
  }

  RngStream sampler = RngStream(cfg.seed).substream(0);
  ControlState state;
  // Line search estimates a variance from the batch, which needs two samples
  // even when the exact tests would settle for one.
  const Index exact_min = cfg.line_search ? 2 : 1;
  state.current_size = cfg.exact_tests ? exact_min : cfg.control.s0;

  double l_prev = cfg.line_search ? cfg.line_search->l0 : kNaN;
  double eff = 0.0;
  const double theta = cfg.control.theta;
  const double nu = cfg.control.nu;

  RunResult result;
  std::vector<Index> batch;
  StopReason reason = StopReason::tolerance;

  for (Index k = 0;; ++k) {
    // Full-dataset diagnostics; outside the evaluation budget.
    const Vector g_full = full_gradient(spec, data, x);
    const double grad_inf = g_full.lpNorm<Eigen::Infinity>();
    const double r_x = full_value(spec, data, x);
    if (!std::isfinite(r_x) || std::abs(r_x) > kDivergenceCap ||
        x.norm() > kDivergenceCap)
      throw DivergenceError("objective value out of range at iteration " +
                            std::to_string(k));

    if (grad_inf <= cfg.tol_grad_inf) { reason = StopReason::tolerance; break; }
    if (eff >= cfg.max_epochs) { reason = StopReason::epoch_budget; break; }
    if (cfg.max_iterations > 0 && k >= cfg.max_iterations) {
      reason = StopReason::iteration_cap;
      break;
    }

    const bool diag = (k % cfg.diagnostics_every) == 0;

    TraceRecord rec;
    rec.k = k;
    rec.f_error = r_x - cfg.r_star;
    rec.grad_inf = grad_inf;
    rec.alpha = 0.0;
    rec.l = kNaN;
    rec.angle_deg = kNaN;
    rec.beta = kNaN;
    rec.ip_lhs = rec.ip_rhs = rec.orth_lhs = rec.orth_rhs = kNaN;

    BatchStats pop;
    bool have_pop = false;
    if (cfg.exact_tests || diag) {
      pop = population_stats(spec, data, x, g_full);
      have_pop = true;
    }
    if (diag && have_pop) {
      rec.beta = pop.var_grad > 0.0
                     ? pop.var_inner / (pop.var_grad * pop.pivot_norm_sq)
                     : 1.0;
    }
    if (cfg.exact_tests) {
      const double pnsq = pop.pivot_norm_sq;
      const double raw = std::max(pop.var_inner / (theta * theta * pnsq * pnsq),
                                  pop.var_orth / (nu * nu * pnsq));
      state.current_size =
          std::max(state.current_size, ceil_clamped(raw, exact_min, n));
    }

    const Index m = state.current_size;
    sample_without_replacement(sampler, n, m, batch);
    GradientBundle bundle = batch_gradient(spec, data, x, batch);
    eff += static_cast<double>(m) / static_cast<double>(n);
    rec.sample_size = m;

    const Vector& g = bundle.batch_mean;
    const double g_norm = g.norm();
    if (diag && g_norm > 0.0) rec.angle_deg = angle_degrees(g, g_full);

    const bool degenerate = g_norm <= kDegeneratePivot;
    if (!degenerate) {
      if (cfg.line_search) {
        const LineSearchResult ls =
            backtrack(spec, data, x, bundle, batch, l_prev, *cfg.line_search);
        eff += ls.function_evals * static_cast<double>(m) / static_cast<double>(n);
        l_prev = ls.l_k;
        rec.alpha = ls.alpha_k;
        rec.l = ls.l_k;
      } else {
        rec.alpha = *cfg.fixed_alpha;
      }
    }

    bool converged_full = false;
    if (cfg.exact_tests) {
      rec.branch = Branch::exact;
      const double pnsq = pop.pivot_norm_sq;
      rec.ip_lhs = pop.var_inner / static_cast<double>(m);
      rec.ip_rhs = theta * theta * pnsq * pnsq;
      rec.orth_lhs = pop.var_orth / static_cast<double>(m);
      rec.orth_rhs = nu * nu * pnsq;
    } else {
      const ControlDecision decision =
          controller_step(state, bundle, cfg.control, n, k);
      rec.branch = decision.branch;
      converged_full = decision.full_batch_converged;
      if (!decision.tests.empty()) {
        rec.ip_lhs = decision.tests[0].lhs;
        rec.ip_rhs = decision.tests[0].rhs;
      }
      if (decision.tests.size() > 1 &&
          decision.tests[1].which == TestWhich::orthogonality) {
        rec.orth_lhs = decision.tests[1].lhs;
        rec.orth_rhs = decision.tests[1].rhs;
      }
    }

    rec.eff_evals = eff;
    result.trace.push_back(rec);
    if (cfg.observer) cfg.observer(rec, bundle, x);

    if (converged_full) {
      // A full-size batch gradient at numerical zero: nothing left to sample.
      reason = StopReason::tolerance;
      break;
    }
    if (!degenerate) {
      x -= rec.alpha * g;
      if (!x.allFinite() || x.norm() > kDivergenceCap)
        throw DivergenceError("iterate diverged at iteration " + std::to_string(k));
    }
  }

  result.x = std::move(x);
  result.reason = reason;
  result.eff_evals = eff;
  return result;
}

}  // namespace adasample
