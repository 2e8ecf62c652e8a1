#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "adasample/control.hpp"
#include "adasample/line_search.hpp"
#include "adasample/objective.hpp"
#include "adasample/types.hpp"

namespace adasample {

// One row per optimizer iteration, written at the pre-step iterate x_k.
// eff_evals is cumulative and includes this iteration's batch work. In norm
// mode the single norm-test margin occupies ip_lhs / ip_rhs and the orth
// columns are nan; angle_deg and beta are nan on throttled iterations.
struct TraceRecord {
  Index k = 0;
  Index sample_size = 0;
  double alpha = 0.0;
  double l = 0.0;  // nan in fixed-step mode
  double eff_evals = 0.0;
  double f_error = 0.0;
  double grad_inf = 0.0;
  double angle_deg = 0.0;
  double beta = 0.0;
  double ip_lhs = 0.0, ip_rhs = 0.0;
  double orth_lhs = 0.0, orth_rhs = 0.0;
  Branch branch = Branch::keep;
};

enum class StopReason { tolerance, epoch_budget, iteration_cap };

const char* stop_reason_name(StopReason r);

struct RunConfig {
  ControlConfig control;
  // Exactly one of these two must be set.
  std::optional<double> fixed_alpha;
  std::optional<LineSearchConfig> line_search;

  double max_epochs = 100.0;     // budget in effective gradient evaluations / N
  double tol_grad_inf = 1e-6;    // stop when ||grad R||_inf <= tol
  std::uint64_t seed = 0;
  Vector x0;                     // empty -> origin
  double r_star = 0.0;           // reference optimum; f_error = R(x_k) - r_star

  // Sample sizes driven by the population tests instead of the sampled
  // controller (used to measure the theoretical rate).
  bool exact_tests = false;

  Index max_iterations = 0;      // 0 = no cap (testing hook)
  int diagnostics_every = 1;     // cadence for angle_deg / beta
  // Testing hook, called after each completed iteration with the pre-step
  // iterate; full-gradient work done by the caller is outside the budget.
  std::function<void(const TraceRecord&, const GradientBundle&, const Vector& x)>
      observer;
};

struct RunResult {
  Vector x;
  std::vector<TraceRecord> trace;
  StopReason reason = StopReason::tolerance;
  double eff_evals = 0.0;
};

// Adaptive-sampling gradient loop: draw a fresh batch of the controlled size,
// step along the negative batch mean (fixed alpha or backtracking line
// search), then let the controller choose the next sample size. Effective
// evaluations count |S|/N per batch gradient or batch objective evaluation;
// full-dataset diagnostics are free. Throws DivergenceError / LineSearchError
// on abort, ConfigError on invalid configuration.
RunResult run(const ObjectiveSpec& spec, const Dataset& data, const RunConfig& config);

}  // namespace adasample
