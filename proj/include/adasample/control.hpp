#pragma once

#include <deque>
#include <utility>
#include <vector>

#include "adasample/batch_stats.hpp"
#include "adasample/types.hpp"

namespace adasample {

enum class SampleTest { augmented_inner_product, norm };
enum class TestWhich { inner_product, orthogonality, norm };

// Which controller branch produced the decision for this iteration.
enum class Branch {
  keep,             // tests passed, size unchanged
  grow_main,        // main test(s) failed; resized from the batch-mean pivot
  grow_avg,         // running-average retest failed; resized from that pivot
  degenerate_grow,  // batch gradient ~ 0 below full size; size doubled
  degenerate_full,  // batch gradient ~ 0 at full size; optimizer should stop
  exact,            // size chosen by the population tests (oracle-driven mode)
};

const char* branch_name(Branch b);

struct ControlConfig {
  double theta = 0.9;
  double nu = 5.84;
  int r = 10;           // running-average window
  double omega = 10.0;  // target noise-to-signal ratio in the safeguard
  double gamma = 0.38460498941515414;  // gamma_from(10, 10)
  Index s0 = 2;
  SampleTest test_kind = SampleTest::augmented_inner_product;

  void validate(Index n_samples) const;  // throws ConfigError
};

// gamma = 1/sqrt(r) + (1 - 1/sqrt(r)) / omega; in (0, 1) for r > 1, omega > 1.
double gamma_from(int r, double omega);

struct ControlState {
  Index current_size = 2;
  // Most recent batch-mean gradients with their iteration indices, newest
  // last, at most r entries; cleared on every size change.
  std::deque<std::pair<Index, Vector>> recent;
  Index stagnation_count = 0;  // iterations since the last size change
};

struct TestOutcome {
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
  TestWhich which = TestWhich::inner_product;
};

struct ControlDecision {
  Index new_size = 0;
  // Outcomes with the batch-mean pivot first; when the running-average
  // retest ran its outcomes are appended after them.
  std::vector<TestOutcome> tests;
  bool used_running_average = false;
  bool full_batch_converged = false;
  Branch branch = Branch::keep;
};

// var_inner / |S| <= theta^2 ||p||^4, boundary passes.
TestOutcome inner_product_test(const BatchStats& stats, double theta);
// var_orth / |S| <= nu^2 ||p||^2.
TestOutcome orthogonality_test(const BatchStats& stats, double nu);
// var_grad / |S| <= theta^2 ||p||^2.
TestOutcome norm_test(const BatchStats& stats, double theta);

// Smallest size satisfying both augmented tests at the measured variances:
// ceil of max(var_inner / (theta^2 ||p||^4), var_orth / (nu^2 ||p||^2)),
// clamped to [current+1, n]; returns n when current is already n.
Index next_sample_size(const BatchStats& stats, double theta, double nu,
                       Index current, Index n);
// Norm-test analog: ceil of var_grad / (theta^2 ||p||^2), same clamping.
Index next_sample_size_norm(const BatchStats& stats, double theta,
                            Index current, Index n);

// Mean of the r buffered gradients, oldest to newest. Pre: exactly r entries.
Vector running_average(const ControlState& state, int r);

// True when ||g_avg|| < gamma ||g_batch||: the averaged direction is much
// shorter than the latest batch gradient, i.e. the noisy regime.
bool noisy_regime_check(const Vector& g_avg, const Vector& g_batch, double gamma);

// One controller decision for the batch that produced `bundle` at iteration
// `iteration`. Deterministic in its inputs; updates state (size, ring buffer,
// stagnation count) in place. n is the dataset size.
ControlDecision controller_step(ControlState& state, const GradientBundle& bundle,
                                const ControlConfig& config, Index n, Index iteration);

}  // namespace adasample
