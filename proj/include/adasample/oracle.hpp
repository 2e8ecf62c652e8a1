#pragma once

#include "adasample/batch_stats.hpp"
#include "adasample/objective.hpp"
#include "adasample/rng.hpp"
#include "adasample/types.hpp"

namespace adasample {

// Exact (population) counterparts of the three sampling tests at a given
// sample size: population variances with the full gradient as pivot, divided
// by the size, against the same right-hand sides the sampled tests use.
struct ExactTestReport {
  double ip_lhs = 0.0, ip_rhs = 0.0;
  double orth_lhs = 0.0, orth_rhs = 0.0;
  double norm_lhs = 0.0, norm_rhs = 0.0;
  bool ip_pass = false, orth_pass = false, norm_pass = false;
};

ExactTestReport exact_tests(const ObjectiveSpec& spec, const Dataset& data,
                            const Vector& x, double theta, double nu,
                            Index sample_size);

// beta(x) = s_min_inner / s_min_norm <= 1: the ratio of the minimal sample
// sizes that satisfy the exact inner-product and norm tests. By convention
// beta = 1 (and both sizes 0) when the total gradient variance vanishes.
struct BetaReport {
  double beta = 1.0;
  double s_min_inner = 0.0;
  double s_min_norm = 0.0;
};

BetaReport beta_and_min_sizes(const ObjectiveSpec& spec, const Dataset& data,
                              const Vector& x, double theta);

// Angle between two nonzero vectors, in degrees. Throws ConfigError on a
// zero vector.
double angle_degrees(const Vector& a, const Vector& b);

// Linear rate bound 1 - mu / (L (1 + theta^2 + nu^2)) for a mu-strongly
// convex objective with L-Lipschitz gradient. Throws ConfigError unless
// 0 < mu <= L and theta, nu >= 0.
double theoretical_rate(double theta, double nu, double mu, double l);

// Fraction of `trials` fresh batches of the given size whose mean gradient
// has positive inner product with the full gradient. Pre: trials >= 1000,
// 1 <= sample_size <= N, nonzero full gradient. Deterministic in the stream
// state; advances rng once and runs trials on derived substreams.
double descent_probability(const ObjectiveSpec& spec, const Dataset& data,
                           const Vector& x, Index sample_size, Index trials,
                           RngStream& rng);

// Deterministic full-gradient descent with the variance-aware backtracking
// search on the full batch, to ||grad R||_inf <= tol. Iteration cap 1e6.
struct ReferenceOptimum {
  Vector x_star;
  double r_star = 0.0;
  Index iterations = 0;
};

ReferenceOptimum reference_optimum(const ObjectiveSpec& spec, const Dataset& data,
                                   double tol = 1e-8);

// nu / sqrt(1 - theta^2): bound on the tangent of the angle between the batch
// mean and the full gradient when both augmented tests hold. Pre: theta in
// [0, 1), nu >= 0.
double tan_bound(double theta, double nu);

// Per-iterate oracle row as emitted by the oracle subcommand. rho is nan
// unless the strong-convexity constants are known (the quadratic objective,
// where mu = L = 1).
struct OracleReport {
  Index k = 0;
  Index sample_size = 0;
  BetaReport beta;
  double angle_deg = 0.0;
  ExactTestReport tests;
  double rho = 0.0;
  double tan_bound = 0.0;
};

}  // namespace adasample
